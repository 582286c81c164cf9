#pragma once

#include <cstddef>
#include <vector>

#include "tsr/volume.hpp"

namespace tsr {

// Channel-major activation tensor used by the network and the conv kernels:
//   index = ((c*T + t)*Y + y)*X + x
// Channel-major keeps the x rows contiguous per channel, which is what the
// vectorized kernels want; VideoVolume stays interleaved for I/O.
struct Tensor {
    int c = 0, t = 0, y = 0, x = 0;
    std::vector<float> v;

    std::size_t index(int ci, int ti, int yi, int xi) const {
        return ((static_cast<std::size_t>(ci) * t + ti) * y + yi) * x + xi;
    }
    float at(int ci, int ti, int yi, int xi) const { return v[index(ci, ti, yi, xi)]; }
    float& at(int ci, int ti, int yi, int xi) { return v[index(ci, ti, yi, xi)]; }
    std::size_t size() const { return static_cast<std::size_t>(c) * t * y * x; }
    bool same_shape(const Tensor& o) const {
        return c == o.c && t == o.t && y == o.y && x == o.x;
    }
};

Tensor make_tensor(int c, int t, int y, int x, float fill = 0.0f);

Tensor to_planar(const VideoVolume& v);
VideoVolume from_planar(const Tensor& t);

// Clamp padding by (rt, ry, rx) on both ends of each axis, per channel.
Tensor replicate_pad(const Tensor& in, int rt, int ry, int rx);
Tensor zero_pad(const Tensor& in, int rt, int ry, int rx);

// Adjoint of replicate_pad: folds the padded borders back onto the edge
// samples. Used to route conv gradients through the padding.
Tensor fold_replicate_pad(const Tensor& grad_padded, int rt, int ry, int rx);

} // namespace tsr
