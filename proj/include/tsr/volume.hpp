#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tsr/errors.hpp"

namespace tsr {

// 4-axis intensity volume, the currency of every operation in this project.
// Layout is t-major, then y, x, c, so a frame is one contiguous slab:
//   index = ((t*height + y)*width + x)*channels + c
// Values are float32 in [0,1] after I/O or degradation; intermediate
// residuals and corrections may leave the range.
struct VideoVolume {
    int frames = 0;
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<float> data;

    std::size_t index(int t, int y, int x, int c) const {
        return ((static_cast<std::size_t>(t) * height + y) * width + x) * channels + c;
    }
    float at(int t, int y, int x, int c) const { return data[index(t, y, x, c)]; }
    float& at(int t, int y, int x, int c) { return data[index(t, y, x, c)]; }

    std::size_t sample_count() const {
        return static_cast<std::size_t>(frames) * height * width * channels;
    }
    bool same_shape(const VideoVolume& o) const {
        return frames == o.frames && height == o.height && width == o.width &&
               channels == o.channels;
    }
};

VideoVolume make_volume(int frames, int height, int width, int channels, float fill = 0.0f);

// Throws input_error if dims or data length violate the volume invariants.
void validate_shape(const VideoVolume& v);

enum class Axis { t = 0, y = 1, x = 2 };

// Bijective relabeling of the (t, y, x) axes; the channel axis never moves.
// src[i] names the input axis that supplies output axis i.
struct AxisPermutation {
    std::array<int, 3> src{0, 1, 2};

    static AxisPermutation identity() { return {{0, 1, 2}}; }
    static AxisPermutation swap_tx() { return {{2, 1, 0}}; }
    static AxisPermutation swap_ty() { return {{1, 0, 2}}; }

    AxisPermutation inverse() const {
        AxisPermutation inv;
        for (int i = 0; i < 3; ++i) inv.src[src[i]] = i;
        return inv;
    }
    bool is_identity() const { return src == std::array<int, 3>{0, 1, 2}; }
    bool is_valid() const;
};

// Materializes the permuted copy: out[perm(t,y,x), c] = in[(t,y,x), c].
VideoVolume transpose(const VideoVolume& v, const AxisPermutation& perm);

VideoVolume flip(const VideoVolume& v, Axis axis);

// Clockwise quarter turns of each frame; quarter_turns in {1,2,3}.
VideoVolume rotate_spatial(const VideoVolume& v, int quarter_turns);

// Contiguous copy of the box; rejects out-of-bounds boxes.
VideoVolume crop(const VideoVolume& v, std::array<int, 3> origin_tyx,
                 std::array<int, 3> size_tyx);

// Drops trailing frames so the frame count is a multiple of s.
VideoVolume trim_to_temporal_multiple(const VideoVolume& v, int s);

// Binary ".stv" volume format: magic "STV1"; u32le T, Y, X, C, reserved(=0);
// then T*Y*X*C float32le samples in layout order. Lossless round trip.
void write_volume(const VideoVolume& v, const std::string& path);
VideoVolume read_volume(const std::string& path);

// Frame-directory I/O. Lossless 8-bit PNG frames; lexicographic filename
// order defines time. Loading maps [0,255] -> [0,1] by division by 255;
// saving clamps to [0,1] and quantizes by round(v*255).
VideoVolume load_frame_dir(const std::string& dir);
void save_frame_dir(const VideoVolume& v, const std::string& dir);

} // namespace tsr
