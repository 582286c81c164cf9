#include "tsr/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tsr/resample.hpp"

namespace tsr {

std::string to_string(Orientation o) {
    switch (o) {
        case Orientation::within: return "within";
        case Orientation::across_x: return "across_x";
        default: return "across_y";
    }
}

std::string to_string(Augmentation a) {
    switch (a) {
        case Augmentation::none: return "none";
        case Augmentation::flip_t: return "flip_t";
        case Augmentation::flip_x: return "flip_x";
        case Augmentation::flip_y: return "flip_y";
        case Augmentation::rot90: return "rot90";
        case Augmentation::rot180: return "rot180";
        default: return "rot270";
    }
}

std::optional<Orientation> orientation_from_string(const std::string& s) {
    if (s == "within") return Orientation::within;
    if (s == "across_x") return Orientation::across_x;
    if (s == "across_y") return Orientation::across_y;
    return std::nullopt;
}

std::optional<Augmentation> augmentation_from_string(const std::string& s) {
    if (s == "none") return Augmentation::none;
    if (s == "flip_t") return Augmentation::flip_t;
    if (s == "flip_x") return Augmentation::flip_x;
    if (s == "flip_y") return Augmentation::flip_y;
    if (s == "rot90") return Augmentation::rot90;
    if (s == "rot180") return Augmentation::rot180;
    if (s == "rot270") return Augmentation::rot270;
    return std::nullopt;
}

VideoVolume apply_augmentation(const VideoVolume& v, Augmentation a) {
    switch (a) {
        case Augmentation::none: return v;
        case Augmentation::flip_t: return flip(v, Axis::t);
        case Augmentation::flip_x: return flip(v, Axis::x);
        case Augmentation::flip_y: return flip(v, Axis::y);
        case Augmentation::rot90: return rotate_spatial(v, 1);
        case Augmentation::rot180: return rotate_spatial(v, 2);
        default: return rotate_spatial(v, 3);
    }
}

namespace {

bool admits_crop(const VideoVolume& v, const SamplerConfig& cfg) {
    return v.frames >= cfg.crop_t && v.height >= cfg.crop_y && v.width >= cfg.crop_x;
}

// Base level volume before augmentation. Spatial downscale first; across
// orientations then swap an axis with time and rect-downsample along the
// new time axis.
VideoVolume build_base(const VideoVolume& input, Orientation o, double scale, int factor) {
    VideoVolume v = scale == 1.0 ? input : spatial_scale_bicubic(input, scale);
    if (o == Orientation::across_x)
        v = transpose(v, AxisPermutation::swap_tx());
    else if (o == Orientation::across_y)
        v = transpose(v, AxisPermutation::swap_ty());
    if (factor > 1) {
        v = trim_to_temporal_multiple(v, factor);
        v = temporal_rect_downsample(v, factor);
    }
    return v;
}

} // namespace

std::vector<PyramidLevel> build_pyramid(const VideoVolume& input, const PyramidConfig& cfg,
                                        const SamplerConfig& sampler,
                                        std::vector<std::string>* dropped) {
    validate_shape(input);
    if (cfg.spatial_scales.empty() || cfg.temporal_factors.empty() ||
        cfg.orientations.empty())
        throw input_error("pyramid config needs at least one scale, factor, orientation");
    for (double s : cfg.spatial_scales)
        if (!(s > 0.0) || s > 1.0)
            throw input_error("pyramid spatial scales must be in (0, 1]");
    for (int f : cfg.temporal_factors)
        if (f < 1) throw input_error("pyramid temporal factors must be >= 1");
    if (sampler.crop_t < 4 || sampler.crop_t % 2 != 0)
        throw input_error("crop_t must be even and >= 4");
    if (sampler.crop_y < 1 || sampler.crop_x < 1)
        throw input_error("crop dims must be >= 1");

    std::vector<Augmentation> augs{Augmentation::none};
    for (auto a : cfg.augmentations)
        if (a != Augmentation::none) augs.push_back(a);

    std::vector<PyramidLevel> levels;
    for (Orientation o : cfg.orientations)
        for (double scale : cfg.spatial_scales)
            for (int factor : cfg.temporal_factors) {
                VideoVolume base;
                try {
                    base = build_base(input, o, scale, factor);
                } catch (const input_error& e) {
                    if (dropped) {
                        std::ostringstream msg;
                        msg << to_string(o) << " scale=" << scale << " factor=" << factor
                            << ": " << e.what();
                        dropped->push_back(msg.str());
                    }
                    continue;
                }
                for (Augmentation a : augs) {
                    VideoVolume vol = apply_augmentation(base, a);
                    if (!admits_crop(vol, sampler)) {
                        if (dropped) {
                            std::ostringstream msg;
                            msg << to_string(o) << " scale=" << scale
                                << " factor=" << factor << " aug=" << to_string(a)
                                << ": level " << vol.frames << "x" << vol.height << "x"
                                << vol.width << " too small for crop " << sampler.crop_t
                                << "x" << sampler.crop_y << "x" << sampler.crop_x;
                            dropped->push_back(msg.str());
                        }
                        continue;
                    }
                    PyramidLevel lvl;
                    lvl.id = static_cast<int>(levels.size());
                    lvl.spatial_scale = scale;
                    lvl.temporal_factor = factor;
                    lvl.orientation = o;
                    lvl.augmentation = a;
                    lvl.volume = std::move(vol);
                    levels.push_back(std::move(lvl));
                }
            }
    if (levels.empty()) {
        std::ostringstream msg;
        msg << "input " << input.frames << "x" << input.height << "x" << input.width
            << " admits no pyramid level; a level must be at least " << sampler.crop_t
            << "x" << sampler.crop_y << "x" << sampler.crop_x
            << " after scaling/swapping";
        throw input_error(msg.str());
    }
    return levels;
}

CropWeightTable crop_weights(const PyramidLevel& level, const SamplerConfig& cfg) {
    const VideoVolume& v = level.volume;
    if (!admits_crop(v, cfg)) throw input_error("level does not admit a crop");
    const int T = v.frames, Y = v.height, X = v.width, C = v.channels;

    // Per-voxel gradient magnitude, then a summed-area table over (t,y,x)
    // so each crop-box mean is O(1).
    std::vector<double> sat(static_cast<std::size_t>(T + 1) * (Y + 1) * (X + 1), 0.0);
    auto sat_at = [&](int t, int y, int x) -> double& {
        return sat[(static_cast<std::size_t>(t) * (Y + 1) + y) * (X + 1) + x];
    };
    for (int t = 0; t < T; ++t)
        for (int y = 0; y < Y; ++y)
            for (int x = 0; x < X; ++x) {
                double g = 0.0;
                for (int c = 0; c < C; ++c) {
                    const float s = v.at(t, y, x, c);
                    if (y + 1 < Y) g += std::abs(v.at(t, y + 1, x, c) - s);
                    if (x + 1 < X) g += std::abs(v.at(t, y, x + 1, c) - s);
                }
                g /= C;
                sat_at(t + 1, y + 1, x + 1) = g + sat_at(t, y + 1, x + 1) +
                                              sat_at(t + 1, y, x + 1) +
                                              sat_at(t + 1, y + 1, x) -
                                              sat_at(t, y, x + 1) - sat_at(t, y + 1, x) -
                                              sat_at(t + 1, y, x) + sat_at(t, y, x);
            }
    auto box_sum = [&](int t0, int y0, int x0, int dt, int dy, int dx) {
        const int t1 = t0 + dt, y1 = y0 + dy, x1 = x0 + dx;
        return sat_at(t1, y1, x1) - sat_at(t0, y1, x1) - sat_at(t1, y0, x1) -
               sat_at(t1, y1, x0) + sat_at(t0, y0, x1) + sat_at(t0, y1, x0) +
               sat_at(t1, y0, x0) - sat_at(t0, y0, x0);
    };

    CropWeightTable table;
    const int st = std::max(1, cfg.origin_stride);
    const double box_n = static_cast<double>(cfg.crop_t) * cfg.crop_y * cfg.crop_x;
    for (int t0 = 0; t0 + cfg.crop_t <= T; t0 += st)
        for (int y0 = 0; y0 + cfg.crop_y <= Y; y0 += st)
            for (int x0 = 0; x0 + cfg.crop_x <= X; x0 += st) {
                table.origins.push_back({t0, y0, x0});
                table.weights.push_back(
                    std::max(0.0, box_sum(t0, y0, x0, cfg.crop_t, cfg.crop_y, cfg.crop_x) /
                                      box_n));
            }

    double total = 0.0;
    for (double w : table.weights) total += w;
    if (total <= 0.0) {
        table.uniform_fallback = true;
        std::fill(table.weights.begin(), table.weights.end(), 1.0);
    }
    table.cumulative.resize(table.weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < table.weights.size(); ++i) {
        acc += table.weights[i];
        table.cumulative[i] = acc;
    }
    return table;
}

PairSampler::PairSampler(const std::vector<PyramidLevel>& levels, const SamplerConfig& cfg)
    : levels_(levels), cfg_(cfg), rng_(cfg.seed) {
    if (levels_.empty()) throw input_error("no eligible pyramid level");
    if (cfg_.across_probability < 0.0 || cfg_.across_probability > 1.0)
        throw input_error("across_probability must be in [0, 1]");
    tables_.reserve(levels_.size());
    for (const auto& lvl : levels_) {
        tables_.push_back(crop_weights(lvl, cfg_));
        if (lvl.orientation == Orientation::within)
            within_ids_.push_back(lvl.id);
        else
            across_ids_.push_back(lvl.id);
    }
}

ExamplePair PairSampler::next() {
    // Orientation class by the configured mix; an empty class defers to the
    // other so a within-only or across-only pyramid still samples.
    const bool want_across = rng_.uniform() < cfg_.across_probability;
    const std::vector<int>* pool = want_across ? &across_ids_ : &within_ids_;
    if (pool->empty()) pool = want_across ? &within_ids_ : &across_ids_;

    const int level_id = (*pool)[rng_.below(pool->size())];
    const PyramidLevel& lvl = levels_[level_id];
    const CropWeightTable& table = tables_[level_id];
    const std::size_t pick = rng_.weighted(table.cumulative);

    ExamplePair pair;
    pair.level_id = level_id;
    pair.origin = table.origins[pick];
    pair.orientation = lvl.orientation;
    pair.augmentation = lvl.augmentation;
    pair.htr = crop(lvl.volume, pair.origin, {cfg_.crop_t, cfg_.crop_y, cfg_.crop_x});
    pair.ltr = temporal_rect_downsample(pair.htr, 2);
    return pair;
}

} // namespace tsr
