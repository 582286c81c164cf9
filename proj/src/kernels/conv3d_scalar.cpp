// Scalar reference kernels. Compiled without arch flags and with
// -ffp-contract=off so the stated per-element operation order is exactly
// what runs: plain multiply then add, ic-major tap order.

#include "tsr/kernels/conv3d.hpp"

#include <cstddef>

namespace tsr::kern {

namespace {

inline std::size_t idx4(int a, int b, int c, int d, int B, int C, int D) {
    return ((static_cast<std::size_t>(a) * B + b) * C + c) * D + d;
}

} // namespace

void conv3d_forward_scalar(float* out, const float* in_pad, const float* w,
                           const float* bias, const Conv3dShape& s) {
    const int pt = s.t + s.kt - 1, py = s.y + s.ky - 1, px = s.x + s.kx - 1;
    const std::size_t ktap = static_cast<std::size_t>(s.kt) * s.ky * s.kx;
    for (int o = 0; o < s.oc; ++o) {
        for (int t = 0; t < s.t; ++t)
            for (int y = 0; y < s.y; ++y) {
                float* dst = out + idx4(o, t, y, 0, s.t, s.y, s.x);
                for (int x = 0; x < s.x; ++x) dst[x] = bias[o];
            }
        for (int i = 0; i < s.ic; ++i) {
            const float* wbase = w + (static_cast<std::size_t>(o) * s.ic + i) * ktap;
            for (int dt = 0; dt < s.kt; ++dt)
                for (int dy = 0; dy < s.ky; ++dy)
                    for (int dx = 0; dx < s.kx; ++dx) {
                        const float wv =
                            wbase[(static_cast<std::size_t>(dt) * s.ky + dy) * s.kx + dx];
                        for (int t = 0; t < s.t; ++t)
                            for (int y = 0; y < s.y; ++y) {
                                const float* src =
                                    in_pad + idx4(i, t + dt, y + dy, dx, pt, py, px);
                                float* dst = out + idx4(o, t, y, 0, s.t, s.y, s.x);
                                for (int x = 0; x < s.x; ++x) dst[x] += wv * src[x];
                            }
                    }
        }
    }
}

void conv3d_grad_weights_scalar(float* gw, float* gb, const float* gout,
                                const float* in_pad, const Conv3dShape& s) {
    const int pt = s.t + s.kt - 1, py = s.y + s.ky - 1, px = s.x + s.kx - 1;
    const std::size_t ktap = static_cast<std::size_t>(s.kt) * s.ky * s.kx;
    for (int o = 0; o < s.oc; ++o) {
        float bacc = 0.0f;
        for (int t = 0; t < s.t; ++t)
            for (int y = 0; y < s.y; ++y) {
                const float* g = gout + idx4(o, t, y, 0, s.t, s.y, s.x);
                for (int x = 0; x < s.x; ++x) bacc += g[x];
            }
        gb[o] = bacc;
        for (int i = 0; i < s.ic; ++i) {
            float* wdst = gw + (static_cast<std::size_t>(o) * s.ic + i) * ktap;
            for (int dt = 0; dt < s.kt; ++dt)
                for (int dy = 0; dy < s.ky; ++dy)
                    for (int dx = 0; dx < s.kx; ++dx) {
                        float acc = 0.0f;
                        for (int t = 0; t < s.t; ++t)
                            for (int y = 0; y < s.y; ++y) {
                                const float* g = gout + idx4(o, t, y, 0, s.t, s.y, s.x);
                                const float* src =
                                    in_pad + idx4(i, t + dt, y + dy, dx, pt, py, px);
                                for (int x = 0; x < s.x; ++x) acc += g[x] * src[x];
                            }
                        wdst[(static_cast<std::size_t>(dt) * s.ky + dy) * s.kx + dx] = acc;
                    }
        }
    }
}

} // namespace tsr::kern
