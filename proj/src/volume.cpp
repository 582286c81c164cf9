#include "tsr/volume.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace tsr {

VideoVolume make_volume(int frames, int height, int width, int channels, float fill) {
    VideoVolume v;
    v.frames = frames;
    v.height = height;
    v.width = width;
    v.channels = channels;
    if (frames < 1 || height < 1 || width < 1)
        throw input_error("volume dims must be >= 1");
    if (channels != 1 && channels != 3)
        throw input_error("volume channels must be 1 or 3");
    v.data.assign(v.sample_count(), fill);
    return v;
}

void validate_shape(const VideoVolume& v) {
    if (v.frames < 1 || v.height < 1 || v.width < 1)
        throw input_error("volume dims must be >= 1");
    if (v.channels != 1 && v.channels != 3)
        throw input_error("volume channels must be 1 or 3");
    if (v.data.size() != v.sample_count())
        throw input_error("volume data length does not match dims");
}

bool AxisPermutation::is_valid() const {
    std::array<bool, 3> seen{false, false, false};
    for (int i = 0; i < 3; ++i) {
        if (src[i] < 0 || src[i] > 2 || seen[src[i]]) return false;
        seen[src[i]] = true;
    }
    return true;
}

VideoVolume transpose(const VideoVolume& v, const AxisPermutation& perm) {
    if (!perm.is_valid()) throw input_error("axis permutation is not a bijection");
    const std::array<int, 3> in_dims{v.frames, v.height, v.width};
    VideoVolume out = make_volume(in_dims[perm.src[0]], in_dims[perm.src[1]],
                                  in_dims[perm.src[2]], v.channels);
    const int C = v.channels;
    std::array<int, 3> oc{}; // output coordinate
    for (oc[0] = 0; oc[0] < out.frames; ++oc[0])
        for (oc[1] = 0; oc[1] < out.height; ++oc[1])
            for (oc[2] = 0; oc[2] < out.width; ++oc[2]) {
                std::array<int, 3> ic{};
                for (int i = 0; i < 3; ++i) ic[perm.src[i]] = oc[i];
                const float* s = &v.data[v.index(ic[0], ic[1], ic[2], 0)];
                float* d = &out.data[out.index(oc[0], oc[1], oc[2], 0)];
                for (int c = 0; c < C; ++c) d[c] = s[c];
            }
    return out;
}

VideoVolume flip(const VideoVolume& v, Axis axis) {
    VideoVolume out = make_volume(v.frames, v.height, v.width, v.channels);
    const int C = v.channels;
    for (int t = 0; t < v.frames; ++t)
        for (int y = 0; y < v.height; ++y)
            for (int x = 0; x < v.width; ++x) {
                int st = t, sy = y, sx = x;
                switch (axis) {
                    case Axis::t: st = v.frames - 1 - t; break;
                    case Axis::y: sy = v.height - 1 - y; break;
                    case Axis::x: sx = v.width - 1 - x; break;
                }
                const float* s = &v.data[v.index(st, sy, sx, 0)];
                float* d = &out.data[out.index(t, y, x, 0)];
                for (int c = 0; c < C; ++c) d[c] = s[c];
            }
    return out;
}

VideoVolume rotate_spatial(const VideoVolume& v, int quarter_turns) {
    if (quarter_turns < 1 || quarter_turns > 3)
        throw input_error("quarter_turns must be 1, 2, or 3");
    VideoVolume cur = v;
    for (int q = 0; q < quarter_turns; ++q) {
        // One clockwise turn: out[y'][x'] = in[H-1-x'][y'].
        VideoVolume out = make_volume(cur.frames, cur.width, cur.height, cur.channels);
        const int C = cur.channels;
        for (int t = 0; t < cur.frames; ++t)
            for (int y = 0; y < out.height; ++y)
                for (int x = 0; x < out.width; ++x) {
                    const float* s = &cur.data[cur.index(t, cur.height - 1 - x, y, 0)];
                    float* d = &out.data[out.index(t, y, x, 0)];
                    for (int c = 0; c < C; ++c) d[c] = s[c];
                }
        cur = std::move(out);
    }
    return cur;
}

VideoVolume crop(const VideoVolume& v, std::array<int, 3> origin_tyx,
                 std::array<int, 3> size_tyx) {
    const auto [t0, y0, x0] = origin_tyx;
    const auto [dt, dy, dx] = size_tyx;
    if (dt < 1 || dy < 1 || dx < 1) throw input_error("crop size must be >= 1");
    if (t0 < 0 || y0 < 0 || x0 < 0 || t0 + dt > v.frames || y0 + dy > v.height ||
        x0 + dx > v.width)
        throw input_error("crop box out of bounds");
    VideoVolume out = make_volume(dt, dy, dx, v.channels);
    const std::size_t row = static_cast<std::size_t>(dx) * v.channels;
    for (int t = 0; t < dt; ++t)
        for (int y = 0; y < dy; ++y) {
            const float* s = &v.data[v.index(t0 + t, y0 + y, x0, 0)];
            float* d = &out.data[out.index(t, y, 0, 0)];
            std::copy(s, s + row, d);
        }
    return out;
}

VideoVolume trim_to_temporal_multiple(const VideoVolume& v, int s) {
    if (s < 1) throw input_error("temporal factor must be >= 1");
    const int keep = (v.frames / s) * s;
    if (keep < 1) throw input_error("too few frames to trim to a multiple of the factor");
    if (keep == v.frames) return v;
    return crop(v, {0, 0, 0}, {keep, v.height, v.width});
}

// ---------------------------------------------------------------------------
// .stv binary format

namespace {

void put_u32le(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

bool get_u32le(std::istream& is, std::uint32_t& v) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4)) return false;
    v = static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
        (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
    return true;
}

} // namespace

void write_volume(const VideoVolume& v, const std::string& path) {
    validate_shape(v);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw input_error("cannot open for writing: " + path);
    os.write("STV1", 4);
    put_u32le(os, static_cast<std::uint32_t>(v.frames));
    put_u32le(os, static_cast<std::uint32_t>(v.height));
    put_u32le(os, static_cast<std::uint32_t>(v.width));
    put_u32le(os, static_cast<std::uint32_t>(v.channels));
    put_u32le(os, 0u);
    static_assert(std::endian::native == std::endian::little,
                  "float payload below assumes a little-endian host");
    os.write(reinterpret_cast<const char*>(v.data.data()),
             static_cast<std::streamsize>(v.data.size() * sizeof(float)));
    if (!os) throw input_error("write failed: " + path);
}

VideoVolume read_volume(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw input_error("cannot open: " + path);
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "STV1", 4) != 0)
        throw input_error("bad magic in volume file: " + path);
    std::uint32_t t, y, x, c, reserved;
    if (!get_u32le(is, t) || !get_u32le(is, y) || !get_u32le(is, x) || !get_u32le(is, c) ||
        !get_u32le(is, reserved))
        throw input_error("truncated volume header: " + path);
    if (reserved != 0) throw input_error("nonzero reserved field in volume header: " + path);
    constexpr std::uint64_t dim_cap = 1u << 30;
    if (t == 0 || y == 0 || x == 0 || t > dim_cap || y > dim_cap || x > dim_cap)
        throw input_error("volume dimension overflow: " + path);
    if (c != 1 && c != 3) throw input_error("volume channels must be 1 or 3: " + path);
    const std::uint64_t n =
        static_cast<std::uint64_t>(t) * y * x * c;
    if (n > (std::uint64_t{1} << 33))
        throw input_error("volume dimension overflow: " + path);
    VideoVolume v = make_volume(static_cast<int>(t), static_cast<int>(y),
                                static_cast<int>(x), static_cast<int>(c));
    if (!is.read(reinterpret_cast<char*>(v.data.data()),
                 static_cast<std::streamsize>(n * sizeof(float))))
        throw input_error("truncated volume payload: " + path);
    return v;
}

} // namespace tsr
