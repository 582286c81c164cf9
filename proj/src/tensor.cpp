#include "tsr/tensor.hpp"

#include <algorithm>

namespace tsr {

Tensor make_tensor(int c, int t, int y, int x, float fill) {
    Tensor out;
    out.c = c;
    out.t = t;
    out.y = y;
    out.x = x;
    out.v.assign(static_cast<std::size_t>(c) * t * y * x, fill);
    return out;
}

Tensor to_planar(const VideoVolume& vol) {
    Tensor out = make_tensor(vol.channels, vol.frames, vol.height, vol.width);
    for (int c = 0; c < vol.channels; ++c)
        for (int t = 0; t < vol.frames; ++t)
            for (int y = 0; y < vol.height; ++y) {
                const float* src = &vol.data[vol.index(t, y, 0, c)];
                float* dst = &out.v[out.index(c, t, y, 0)];
                for (int x = 0; x < vol.width; ++x) dst[x] = src[static_cast<std::size_t>(x) * vol.channels];
            }
    return out;
}

VideoVolume from_planar(const Tensor& t) {
    VideoVolume out = make_volume(t.t, t.y, t.x, t.c);
    for (int c = 0; c < t.c; ++c)
        for (int ti = 0; ti < t.t; ++ti)
            for (int y = 0; y < t.y; ++y) {
                const float* src = &t.v[t.index(c, ti, y, 0)];
                float* dst = &out.data[out.index(ti, y, 0, c)];
                for (int x = 0; x < t.x; ++x) dst[static_cast<std::size_t>(x) * t.c] = src[x];
            }
    return out;
}

Tensor replicate_pad(const Tensor& in, int rt, int ry, int rx) {
    Tensor out = make_tensor(in.c, in.t + 2 * rt, in.y + 2 * ry, in.x + 2 * rx);
    for (int c = 0; c < in.c; ++c)
        for (int t = 0; t < out.t; ++t) {
            const int st = std::clamp(t - rt, 0, in.t - 1);
            for (int y = 0; y < out.y; ++y) {
                const int sy = std::clamp(y - ry, 0, in.y - 1);
                const float* src = &in.v[in.index(c, st, sy, 0)];
                float* dst = &out.v[out.index(c, t, y, 0)];
                for (int x = 0; x < out.x; ++x)
                    dst[x] = src[std::clamp(x - rx, 0, in.x - 1)];
            }
        }
    return out;
}

Tensor zero_pad(const Tensor& in, int rt, int ry, int rx) {
    Tensor out = make_tensor(in.c, in.t + 2 * rt, in.y + 2 * ry, in.x + 2 * rx);
    for (int c = 0; c < in.c; ++c)
        for (int t = 0; t < in.t; ++t)
            for (int y = 0; y < in.y; ++y) {
                const float* src = &in.v[in.index(c, t, y, 0)];
                float* dst = &out.v[out.index(c, t + rt, y + ry, rx)];
                std::copy(src, src + in.x, dst);
            }
    return out;
}

Tensor fold_replicate_pad(const Tensor& gp, int rt, int ry, int rx) {
    const int ct = gp.t - 2 * rt, cy = gp.y - 2 * ry, cx = gp.x - 2 * rx;
    Tensor out = make_tensor(gp.c, ct, cy, cx);
    for (int c = 0; c < gp.c; ++c)
        for (int t = 0; t < gp.t; ++t) {
            const int dt = std::clamp(t - rt, 0, ct - 1);
            for (int y = 0; y < gp.y; ++y) {
                const int dy = std::clamp(y - ry, 0, cy - 1);
                const float* src = &gp.v[gp.index(c, t, y, 0)];
                float* dst = &out.v[out.index(c, dt, dy, 0)];
                for (int x = 0; x < gp.x; ++x)
                    dst[std::clamp(x - rx, 0, cx - 1)] += src[x];
            }
        }
    return out;
}

} // namespace tsr
