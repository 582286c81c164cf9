#include "tsr/kernels/conv3d.hpp"

#include "tsr/errors.hpp"

namespace tsr::kern {

namespace {

Backend g_requested = Backend::auto_detect;

Backend resolve(Backend b) {
    if (b == Backend::auto_detect)
        return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
    return b;
}

} // namespace

bool cpu_has_avx2() {
#if TSR_KERN_HAVE_AVX2_BUILD
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

void set_backend(Backend b) {
    if (b == Backend::avx2 && !cpu_has_avx2())
        throw input_error("avx2 backend requested but not available on this CPU");
    g_requested = b;
}

Backend active_backend() { return resolve(g_requested); }

std::string backend_name(Backend b) {
    switch (resolve(b)) {
        case Backend::avx2: return "avx2";
        default: return "scalar";
    }
}

void conv3d_forward(float* out, const float* in_pad, const float* w, const float* bias,
                    const Conv3dShape& s) {
#if TSR_KERN_HAVE_AVX2_BUILD
    if (active_backend() == Backend::avx2) {
        conv3d_forward_avx2(out, in_pad, w, bias, s);
        return;
    }
#endif
    conv3d_forward_scalar(out, in_pad, w, bias, s);
}

void conv3d_grad_weights(float* gw, float* gb, const float* gout, const float* in_pad,
                         const Conv3dShape& s) {
#if TSR_KERN_HAVE_AVX2_BUILD
    if (active_backend() == Backend::avx2) {
        conv3d_grad_weights_avx2(gw, gb, gout, in_pad, s);
        return;
    }
#endif
    conv3d_grad_weights_scalar(gw, gb, gout, in_pad, s);
}

} // namespace tsr::kern
