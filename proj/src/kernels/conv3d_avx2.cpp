// AVX2+FMA variants. Same ic-major tap order as the scalar reference per
// output element; results differ from it only by FMA rounding. This TU is
// the only one compiled with -mavx2 -mfma, and it is reached solely through
// the runtime dispatcher after a CPUID check.

#include "tsr/kernels/conv3d.hpp"

#if TSR_KERN_HAVE_AVX2_BUILD

#include <immintrin.h>

#include <cmath>
#include <cstddef>

namespace tsr::kern {

namespace {

inline std::size_t idx4(int a, int b, int c, int d, int B, int C, int D) {
    return ((static_cast<std::size_t>(a) * B + b) * C + c) * D + d;
}

inline float hsum8(__m256 v) {
    __m128 lo = _mm256_castps256_ps128(v);
    __m128 hi = _mm256_extractf128_ps(v, 1);
    __m128 s = _mm_add_ps(lo, hi);
    s = _mm_add_ps(s, _mm_movehl_ps(s, s));
    s = _mm_add_ss(s, _mm_shuffle_ps(s, s, 1));
    return _mm_cvtss_f32(s);
}

// One (t,y) row of outputs for `noc` (1 or 2) output channels.
template <int NOC>
inline void forward_row(float* dst0, float* dst1, const float* in_pad, const float* w,
                        const float* bias, const Conv3dShape& s, int o0, int t, int y,
                        int pt, int py, int px) {
    const std::size_t ktap = static_cast<std::size_t>(s.kt) * s.ky * s.kx;
    int x = 0;
    for (; x + 16 <= s.x; x += 16) {
        __m256 acc00 = _mm256_set1_ps(bias[o0]);
        __m256 acc01 = acc00;
        __m256 acc10 = NOC == 2 ? _mm256_set1_ps(bias[o0 + 1]) : _mm256_setzero_ps();
        __m256 acc11 = acc10;
        for (int i = 0; i < s.ic; ++i) {
            const float* w0 = w + (static_cast<std::size_t>(o0) * s.ic + i) * ktap;
            const float* w1 = w0 + s.ic * ktap;
            for (int dt = 0; dt < s.kt; ++dt)
                for (int dy = 0; dy < s.ky; ++dy) {
                    const float* src = in_pad + idx4(i, t + dt, y + dy, x, pt, py, px);
                    const float* wr0 =
                        w0 + (static_cast<std::size_t>(dt) * s.ky + dy) * s.kx;
                    const float* wr1 =
                        w1 + (static_cast<std::size_t>(dt) * s.ky + dy) * s.kx;
                    for (int dx = 0; dx < s.kx; ++dx) {
                        const __m256 v0 = _mm256_loadu_ps(src + dx);
                        const __m256 v1 = _mm256_loadu_ps(src + dx + 8);
                        const __m256 b0 = _mm256_broadcast_ss(wr0 + dx);
                        acc00 = _mm256_fmadd_ps(b0, v0, acc00);
                        acc01 = _mm256_fmadd_ps(b0, v1, acc01);
                        if constexpr (NOC == 2) {
                            const __m256 b1 = _mm256_broadcast_ss(wr1 + dx);
                            acc10 = _mm256_fmadd_ps(b1, v0, acc10);
                            acc11 = _mm256_fmadd_ps(b1, v1, acc11);
                        }
                    }
                }
        }
        _mm256_storeu_ps(dst0 + x, acc00);
        _mm256_storeu_ps(dst0 + x + 8, acc01);
        if constexpr (NOC == 2) {
            _mm256_storeu_ps(dst1 + x, acc10);
            _mm256_storeu_ps(dst1 + x + 8, acc11);
        }
    }
    for (; x + 8 <= s.x; x += 8) {
        __m256 acc0 = _mm256_set1_ps(bias[o0]);
        __m256 acc1 = NOC == 2 ? _mm256_set1_ps(bias[o0 + 1]) : _mm256_setzero_ps();
        for (int i = 0; i < s.ic; ++i) {
            const float* w0 = w + (static_cast<std::size_t>(o0) * s.ic + i) * ktap;
            const float* w1 = w0 + s.ic * ktap;
            for (int dt = 0; dt < s.kt; ++dt)
                for (int dy = 0; dy < s.ky; ++dy) {
                    const float* src = in_pad + idx4(i, t + dt, y + dy, x, pt, py, px);
                    const float* wr0 =
                        w0 + (static_cast<std::size_t>(dt) * s.ky + dy) * s.kx;
                    const float* wr1 =
                        w1 + (static_cast<std::size_t>(dt) * s.ky + dy) * s.kx;
                    for (int dx = 0; dx < s.kx; ++dx) {
                        const __m256 v0 = _mm256_loadu_ps(src + dx);
                        acc0 = _mm256_fmadd_ps(_mm256_broadcast_ss(wr0 + dx), v0, acc0);
                        if constexpr (NOC == 2)
                            acc1 = _mm256_fmadd_ps(_mm256_broadcast_ss(wr1 + dx), v0, acc1);
                    }
                }
        }
        _mm256_storeu_ps(dst0 + x, acc0);
        if constexpr (NOC == 2) _mm256_storeu_ps(dst1 + x, acc1);
    }
    for (; x < s.x; ++x) {
        float a0 = bias[o0];
        float a1 = NOC == 2 ? bias[o0 + 1] : 0.0f;
        for (int i = 0; i < s.ic; ++i) {
            const float* w0 = w + (static_cast<std::size_t>(o0) * s.ic + i) * ktap;
            const float* w1 = w0 + s.ic * ktap;
            for (int dt = 0; dt < s.kt; ++dt)
                for (int dy = 0; dy < s.ky; ++dy) {
                    const float* src = in_pad + idx4(i, t + dt, y + dy, x, pt, py, px);
                    const float* wr0 =
                        w0 + (static_cast<std::size_t>(dt) * s.ky + dy) * s.kx;
                    const float* wr1 =
                        w1 + (static_cast<std::size_t>(dt) * s.ky + dy) * s.kx;
                    for (int dx = 0; dx < s.kx; ++dx) {
                        a0 = std::fma(wr0[dx], src[dx], a0);
                        if constexpr (NOC == 2) a1 = std::fma(wr1[dx], src[dx], a1);
                    }
                }
        }
        dst0[x] = a0;
        if constexpr (NOC == 2) dst1[x] = a1;
    }
}

} // namespace

void conv3d_forward_avx2(float* out, const float* in_pad, const float* w,
                         const float* bias, const Conv3dShape& s) {
    const int pt = s.t + s.kt - 1, py = s.y + s.ky - 1, px = s.x + s.kx - 1;
    int o = 0;
    for (; o + 2 <= s.oc; o += 2)
        for (int t = 0; t < s.t; ++t)
            for (int y = 0; y < s.y; ++y)
                forward_row<2>(out + idx4(o, t, y, 0, s.t, s.y, s.x),
                               out + idx4(o + 1, t, y, 0, s.t, s.y, s.x), in_pad, w, bias,
                               s, o, t, y, pt, py, px);
    if (o < s.oc)
        for (int t = 0; t < s.t; ++t)
            for (int y = 0; y < s.y; ++y)
                forward_row<1>(out + idx4(o, t, y, 0, s.t, s.y, s.x), nullptr, in_pad, w,
                               bias, s, o, t, y, pt, py, px);
}

void conv3d_grad_weights_avx2(float* gw, float* gb, const float* gout,
                              const float* in_pad, const Conv3dShape& s) {
    const int pt = s.t + s.kt - 1, py = s.y + s.ky - 1, px = s.x + s.kx - 1;
    const std::size_t ktap = static_cast<std::size_t>(s.kt) * s.ky * s.kx;
    const int spatial_taps = s.ky * s.kx;
    constexpr int max_taps = 9;

    for (int o = 0; o < s.oc; ++o) {
        // Bias gradient: vector partial sums, lanes combined once at the end.
        {
            __m256 accv = _mm256_setzero_ps();
            float accs = 0.0f;
            for (int t = 0; t < s.t; ++t)
                for (int y = 0; y < s.y; ++y) {
                    const float* g = gout + idx4(o, t, y, 0, s.t, s.y, s.x);
                    int x = 0;
                    for (; x + 8 <= s.x; x += 8)
                        accv = _mm256_add_ps(accv, _mm256_loadu_ps(g + x));
                    for (; x < s.x; ++x) accs += g[x];
                }
            gb[o] = hsum8(accv) + accs;
        }
        for (int i = 0; i < s.ic; ++i) {
            float* wdst = gw + (static_cast<std::size_t>(o) * s.ic + i) * ktap;
            if (spatial_taps <= max_taps) {
                for (int dt = 0; dt < s.kt; ++dt) {
                    __m256 accv[max_taps];
                    float accs[max_taps];
                    for (int k = 0; k < spatial_taps; ++k) {
                        accv[k] = _mm256_setzero_ps();
                        accs[k] = 0.0f;
                    }
                    for (int t = 0; t < s.t; ++t)
                        for (int y = 0; y < s.y; ++y) {
                            const float* g = gout + idx4(o, t, y, 0, s.t, s.y, s.x);
                            const float* srow =
                                in_pad + idx4(i, t + dt, 0, 0, pt, py, px);
                            int x = 0;
                            for (; x + 8 <= s.x; x += 8) {
                                const __m256 gv = _mm256_loadu_ps(g + x);
                                for (int dy = 0; dy < s.ky; ++dy) {
                                    const float* src =
                                        srow + static_cast<std::size_t>(y + dy) * px + x;
                                    for (int dx = 0; dx < s.kx; ++dx)
                                        accv[dy * s.kx + dx] = _mm256_fmadd_ps(
                                            gv, _mm256_loadu_ps(src + dx),
                                            accv[dy * s.kx + dx]);
                                }
                            }
                            for (; x < s.x; ++x)
                                for (int dy = 0; dy < s.ky; ++dy) {
                                    const float* src =
                                        srow + static_cast<std::size_t>(y + dy) * px + x;
                                    for (int dx = 0; dx < s.kx; ++dx)
                                        accs[dy * s.kx + dx] =
                                            std::fma(g[x], src[dx], accs[dy * s.kx + dx]);
                                }
                        }
                    for (int k = 0; k < spatial_taps; ++k)
                        wdst[static_cast<std::size_t>(dt) * spatial_taps + k] =
                            hsum8(accv[k]) + accs[k];
                }
            } else {
                // Uncommon kernel shapes: one tap at a time.
                for (int dt = 0; dt < s.kt; ++dt)
                    for (int dy = 0; dy < s.ky; ++dy)
                        for (int dx = 0; dx < s.kx; ++dx) {
                            __m256 accv = _mm256_setzero_ps();
                            float accs = 0.0f;
                            for (int t = 0; t < s.t; ++t)
                                for (int y = 0; y < s.y; ++y) {
                                    const float* g =
                                        gout + idx4(o, t, y, 0, s.t, s.y, s.x);
                                    const float* src =
                                        in_pad + idx4(i, t + dt, y + dy, dx, pt, py, px);
                                    int x = 0;
                                    for (; x + 8 <= s.x; x += 8)
                                        accv = _mm256_fmadd_ps(_mm256_loadu_ps(g + x),
                                                               _mm256_loadu_ps(src + x),
                                                               accv);
                                    for (; x < s.x; ++x)
                                        accs = std::fma(g[x], src[x], accs);
                                }
                            wdst[(static_cast<std::size_t>(dt) * s.ky + dy) * s.kx + dx] =
                                hsum8(accv) + accs;
                        }
            }
        }
    }
}

} // namespace tsr::kern

#endif // TSR_KERN_HAVE_AVX2_BUILD
