#pragma once

#include <string>

namespace tsr::kern {

// Shapes for the valid 3D cross-correlation the network is built on.
//   out[o,t,y,x] = bias[o] + sum_{i,dt,dy,dx} w[o,i,dt,dy,dx] * in[i,t+dt,y+dy,x+dx]
// `in` is the already-padded tensor with dims (ic, T+kt-1, Y+ky-1, X+kx-1);
// out dims are (oc, T, Y, X). Weights are [oc][ic][kt][ky][kx].
//
// Per output element the reduction order is fixed: ic-major, then kt, ky, kx.
// The scalar kernel is the reference; SIMD variants keep the same order and
// differ from it only by fused multiply-add rounding.
struct Conv3dShape {
    int oc, ic;
    int kt, ky, kx;
    int t, y, x; // output dims
};

void conv3d_forward(float* out, const float* in_pad, const float* w, const float* bias,
                    const Conv3dShape& s);

// gw[o,i,dt,dy,dx] = sum_{t,y,x} gout[o,t,y,x] * in_pad[i,t+dt,y+dy,x+dx]
// gb[o]            = sum_{t,y,x} gout[o,t,y,x]
void conv3d_grad_weights(float* gw, float* gb, const float* gout, const float* in_pad,
                         const Conv3dShape& s);

// Reference implementations (always available).
void conv3d_forward_scalar(float* out, const float* in_pad, const float* w,
                           const float* bias, const Conv3dShape& s);
void conv3d_grad_weights_scalar(float* gw, float* gb, const float* gout,
                                const float* in_pad, const Conv3dShape& s);

#if defined(__x86_64__) || defined(_M_X64)
#define TSR_KERN_HAVE_AVX2_BUILD 1
void conv3d_forward_avx2(float* out, const float* in_pad, const float* w,
                         const float* bias, const Conv3dShape& s);
void conv3d_grad_weights_avx2(float* gw, float* gb, const float* gout,
                              const float* in_pad, const Conv3dShape& s);
#else
#define TSR_KERN_HAVE_AVX2_BUILD 0
#endif

enum class Backend { auto_detect, scalar, avx2 };

// Select the kernel backend; auto_detect picks AVX2 when the CPU has it.
// Throws input_error when forcing an unavailable backend.
void set_backend(Backend b);
Backend active_backend();
std::string backend_name(Backend b);
bool cpu_has_avx2();

} // namespace tsr::kern
