#pragma once

#include "tsr/volume.hpp"

namespace tsr {

struct BackProjectionConfig {
    int iterations = 10;
    double tolerance = 1e-4; // on the consistency residual RMSE
};

struct BackProjectionResult {
    VideoVolume volume;
    double residual_rmse = 0.0; // consistency residual after the last pass
    int iterations_run = 0;
};

// Iteratively corrects `high` so its bicubic downscale matches `low_ref`:
//   high <- high + up(low_ref - down(high))
// Both directions use the same cubic kernel. Throws train_error when the
// residual grows three iterations in a row (divergence).
BackProjectionResult spatial_backproject(const VideoVolume& high,
                                         const VideoVolume& low_ref,
                                         const BackProjectionConfig& cfg);

// Corrects `high` so its temporal rect downsample by s equals `low_ref`.
// The correction replicates each low frame's residual across its s
// constituent frames (the adjoint of the uniform rect, unscaled), which
// zeroes the residual in one pass.
BackProjectionResult temporal_backproject(const VideoVolume& high,
                                          const VideoVolume& low_ref, int s,
                                          const BackProjectionConfig& cfg);

double rmse(const VideoVolume& a, const VideoVolume& b);

} // namespace tsr
