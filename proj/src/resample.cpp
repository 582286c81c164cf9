#include "tsr/resample.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace tsr {

VideoVolume temporal_rect_downsample(const VideoVolume& v, int s) {
    if (s < 2) throw input_error("temporal subsample factor must be >= 2");
    if (v.frames < s) throw input_error("too few frames for temporal factor");
    if (v.frames % s != 0)
        throw input_error("frame count not divisible by factor; trim first");
    VideoVolume out = make_volume(v.frames / s, v.height, v.width, v.channels);
    const std::size_t frame_n =
        static_cast<std::size_t>(v.height) * v.width * v.channels;
    const double inv = 1.0 / s;
    std::vector<double> acc(frame_n);
    for (int to = 0; to < out.frames; ++to) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (int k = 0; k < s; ++k) {
            const float* src = &v.data[v.index(to * s + k, 0, 0, 0)];
            for (std::size_t i = 0; i < frame_n; ++i) acc[i] += src[i];
        }
        float* dst = &out.data[out.index(to, 0, 0, 0)];
        for (std::size_t i = 0; i < frame_n; ++i)
            dst[i] = static_cast<float>(acc[i] * inv);
    }
    return out;
}

double cubic_kernel(double d) {
    constexpr double a = -0.5;
    d = std::abs(d);
    if (d < 1.0) return ((a + 2.0) * d - (a + 3.0)) * d * d + 1.0;
    if (d < 2.0) return a * (((d - 5.0) * d + 8.0) * d - 4.0);
    return 0.0;
}

namespace {

struct Taps {
    int idx[4];
    double w[4];
};

// Pixel-center mapping from dst index to src coordinate plus the four cubic
// taps, indices clamped to the edge.
std::vector<Taps> make_taps(int src_n, int dst_n) {
    std::vector<Taps> taps(dst_n);
    const double ratio = static_cast<double>(src_n) / dst_n;
    for (int i = 0; i < dst_n; ++i) {
        const double pos = (i + 0.5) * ratio - 0.5;
        const int base = static_cast<int>(std::floor(pos));
        const double frac = pos - base;
        for (int k = 0; k < 4; ++k) {
            taps[i].idx[k] = std::clamp(base - 1 + k, 0, src_n - 1);
            taps[i].w[k] = cubic_kernel(frac + 1.0 - k);
        }
    }
    return taps;
}

} // namespace

VideoVolume spatial_resize_bicubic(const VideoVolume& v, int out_height, int out_width) {
    if (out_height < 1 || out_width < 1)
        throw input_error("spatial resize target must be >= 1 per axis");
    const int C = v.channels;

    // Separable: x pass, then y pass.
    const auto xt = make_taps(v.width, out_width);
    VideoVolume mid = make_volume(v.frames, v.height, out_width, C);
    for (int t = 0; t < v.frames; ++t)
        for (int y = 0; y < v.height; ++y) {
            const float* src = &v.data[v.index(t, y, 0, 0)];
            float* dst = &mid.data[mid.index(t, y, 0, 0)];
            for (int x = 0; x < out_width; ++x) {
                const Taps& tp = xt[x];
                for (int c = 0; c < C; ++c) {
                    double acc = 0.0;
                    for (int k = 0; k < 4; ++k)
                        acc += tp.w[k] * src[tp.idx[k] * C + c];
                    dst[x * C + c] = static_cast<float>(acc);
                }
            }
        }

    const auto yt = make_taps(v.height, out_height);
    VideoVolume out = make_volume(v.frames, out_height, out_width, C);
    const std::size_t row = static_cast<std::size_t>(out_width) * C;
    for (int t = 0; t < v.frames; ++t)
        for (int y = 0; y < out_height; ++y) {
            const Taps& tp = yt[y];
            const float* r0 = &mid.data[mid.index(t, tp.idx[0], 0, 0)];
            const float* r1 = &mid.data[mid.index(t, tp.idx[1], 0, 0)];
            const float* r2 = &mid.data[mid.index(t, tp.idx[2], 0, 0)];
            const float* r3 = &mid.data[mid.index(t, tp.idx[3], 0, 0)];
            float* dst = &out.data[out.index(t, y, 0, 0)];
            for (std::size_t i = 0; i < row; ++i)
                dst[i] = static_cast<float>(tp.w[0] * r0[i] + tp.w[1] * r1[i] +
                                            tp.w[2] * r2[i] + tp.w[3] * r3[i]);
        }
    return out;
}

VideoVolume spatial_scale_bicubic(const VideoVolume& v, double scale) {
    if (!(scale > 0.0)) throw input_error("spatial scale must be positive");
    const int oh = static_cast<int>(std::lround(v.height * scale));
    const int ow = static_cast<int>(std::lround(v.width * scale));
    if (oh < 1 || ow < 1) throw input_error("spatial scale collapses the frame");
    return spatial_resize_bicubic(v, oh, ow);
}

VideoVolume temporal_cubic_upsample(const VideoVolume& v, int r) {
    if (r < 2) throw input_error("temporal upsample factor must be >= 2");
    if (v.frames < 2) throw input_error("temporal upsample needs at least 2 frames");
    const auto taps = make_taps(v.frames, v.frames * r);
    VideoVolume out = make_volume(v.frames * r, v.height, v.width, v.channels);
    const std::size_t frame_n =
        static_cast<std::size_t>(v.height) * v.width * v.channels;
    for (int j = 0; j < out.frames; ++j) {
        const Taps& tp = taps[j];
        const float* f0 = &v.data[v.index(tp.idx[0], 0, 0, 0)];
        const float* f1 = &v.data[v.index(tp.idx[1], 0, 0, 0)];
        const float* f2 = &v.data[v.index(tp.idx[2], 0, 0, 0)];
        const float* f3 = &v.data[v.index(tp.idx[3], 0, 0, 0)];
        float* dst = &out.data[out.index(j, 0, 0, 0)];
        for (std::size_t i = 0; i < frame_n; ++i)
            dst[i] = static_cast<float>(tp.w[0] * f0[i] + tp.w[1] * f1[i] +
                                        tp.w[2] * f2[i] + tp.w[3] * f3[i]);
    }
    return out;
}

} // namespace tsr
