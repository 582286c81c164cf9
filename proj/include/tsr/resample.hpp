#pragma once

#include "tsr/volume.hpp"

namespace tsr {

// Temporal degradation of the imaging model: full-exposure rect blur plus
// subsampling. The kernel is a uniform average of `factor` frames, so the
// blur support equals the gap between output frames.
struct TemporalDegradation {
    int factor = 8;
};

// out[t'] = mean of in[s*t' .. s*t'+s-1], per pixel. Requires frames % s == 0
// (callers trim first; see trim_to_temporal_multiple). Linear, mean-preserving.
VideoVolume temporal_rect_downsample(const VideoVolume& v, int s);

// Per-frame separable resampling with the cubic convolution kernel
// (a = -0.5), pixel-center alignment, clamp-to-edge. Output dims are
// round(height*scale) x round(width*scale); the time axis is untouched.
VideoVolume spatial_scale_bicubic(const VideoVolume& v, double scale);

// Same kernel and alignment, but resampling straight to the given dims.
// spatial_scale_bicubic delegates here; back-projection needs exact dims.
VideoVolume spatial_resize_bicubic(const VideoVolume& v, int out_height, int out_width);

// Per-pixel cubic interpolation along t to r*frames samples. Output frame j
// sits at input time (j + 0.5)/r - 0.5, so averaging each group of r output
// frames lands back on the input frame centers (rect-consistency phase).
VideoVolume temporal_cubic_upsample(const VideoVolume& v, int r);

// The cubic convolution kernel itself (a = -0.5), exposed for oracle tests.
double cubic_kernel(double d);

} // namespace tsr
