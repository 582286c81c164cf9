#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsr/rng.hpp"
#include "tsr/volume.hpp"

namespace tsr {

enum class Orientation { within, across_x, across_y };

enum class Augmentation { none, flip_t, flip_x, flip_y, rot90, rot180, rot270 };

std::string to_string(Orientation o);
std::string to_string(Augmentation a);
std::optional<Orientation> orientation_from_string(const std::string& s);
std::optional<Augmentation> augmentation_from_string(const std::string& s);

// One materialized level of the internal training pyramid. Within-dimension
// levels combine spatial bicubic downscaling with temporal rect
// downsampling; across-dimension levels spatially downscale first, swap a
// spatial axis with time, then rect-downsample along the new time axis.
struct PyramidLevel {
    int id = 0;
    double spatial_scale = 1.0;
    int temporal_factor = 1;
    Orientation orientation = Orientation::within;
    Augmentation augmentation = Augmentation::none;
    VideoVolume volume;
};

struct PyramidConfig {
    std::vector<double> spatial_scales{1.0, 0.5, 0.35355339059327373, 0.25};
    std::vector<int> temporal_factors{1, 2};
    std::vector<Orientation> orientations{Orientation::within, Orientation::across_x,
                                          Orientation::across_y};
    std::vector<Augmentation> augmentations{Augmentation::flip_t, Augmentation::flip_x,
                                            Augmentation::flip_y, Augmentation::rot90,
                                            Augmentation::rot180, Augmentation::rot270};
};

struct SamplerConfig {
    int crop_t = 16; // HTR crop; the LTR side is this blurred+subsampled x2
    int crop_y = 36;
    int crop_x = 36;
    double across_probability = 0.5;
    int origin_stride = 4;
    std::uint64_t seed = 0;
};

// Builds every requested (orientation, scale, factor, augmentation)
// combination, skipping levels too small for the crop; the skip reasons go
// to `dropped` when provided. Throws input_error when no level is eligible.
std::vector<PyramidLevel> build_pyramid(const VideoVolume& input, const PyramidConfig& cfg,
                                        const SamplerConfig& sampler,
                                        std::vector<std::string>* dropped = nullptr);

VideoVolume apply_augmentation(const VideoVolume& v, Augmentation a);

// Crop-origin weights for one level: mean over the crop box of the spatial
// gradient magnitude |dv/dy| + |dv/dx| (forward differences, channel mean),
// on a stride grid of origins. All-zero weights fall back to uniform.
struct CropWeightTable {
    std::vector<std::array<int, 3>> origins;
    std::vector<double> weights;    // >= 0, at least one positive
    std::vector<double> cumulative; // prefix sums of weights
    bool uniform_fallback = false;
};

CropWeightTable crop_weights(const PyramidLevel& level, const SamplerConfig& cfg);

struct ExamplePair {
    VideoVolume ltr; // = temporal_rect_downsample(htr, 2), exactly
    VideoVolume htr;
    int level_id = 0;
    std::array<int, 3> origin{0, 0, 0};
    Orientation orientation = Orientation::within;
    Augmentation augmentation = Augmentation::none;
};

// Deterministic stream of training pairs: orientation class by the config
// mix, level uniform within the class, origin by gradient-weighted draw.
class PairSampler {
public:
    PairSampler(const std::vector<PyramidLevel>& levels, const SamplerConfig& cfg);

    ExamplePair next();

    const SamplerConfig& config() const { return cfg_; }

private:
    const std::vector<PyramidLevel>& levels_;
    SamplerConfig cfg_;
    Rng rng_;
    std::vector<CropWeightTable> tables_;
    std::vector<int> within_ids_;
    std::vector<int> across_ids_;
};

} // namespace tsr
