#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tsr/tensor.hpp"
#include "tsr/volume.hpp"

namespace tsr {

struct ConvLayerSpec {
    int in_channels = 0;
    int out_channels = 0;
    int kt = 3, ky = 3, kx = 3;
    bool relu = true;
};

struct ConvLayer {
    ConvLayerSpec spec;
    std::vector<float> w; // [out][in][kt][ky][kx]
    std::vector<float> b; // [out]

    std::size_t weight_count() const {
        return static_cast<std::size_t>(spec.out_channels) * spec.in_channels * spec.kt *
               spec.ky * spec.kx;
    }
};

// The video-specific TSRx2 network: a fixed stack of stride-1 3D conv layers
// computing a residual over the cubic-upsampled input. The paper stack is
// eight layers: 1-4 with 3x3x3 kernels, 5-8 with 1x3x3; every layer but the
// last is followed by ReLU, and the last projects back to the video's
// channel count with no activation.
struct TsrNet {
    std::vector<ConvLayer> layers;
    int video_channels = 0;
    std::uint64_t init_seed = 0;

    int width() const { return layers.empty() ? 0 : layers.front().spec.out_channels; }
};

// Glorot-uniform weights (b = sqrt(6/(fan_in+fan_out))), zero biases,
// deterministic for a given seed.
TsrNet make_net(const std::vector<ConvLayerSpec>& specs, std::uint64_t seed);

// The paper architecture for a given video channel count; `width` is the
// hidden channel count (128 in the paper, smaller for desk-scale runs).
std::vector<ConvLayerSpec> paper_layer_specs(int video_channels, int width = 128);
TsrNet make_tsr_net(int video_channels, int width, std::uint64_t seed);

// Receptive-field extent (t, y, x) of a layer stack; the paper stack gives
// 9 x 17 x 17.
std::array<int, 3> receptive_field_extent(const std::vector<ConvLayerSpec>& specs);

// Cached activations needed by backward(); inputs[k] is the input tensor of
// layer k (post-ReLU output of layer k-1).
struct ForwardTape {
    std::vector<Tensor> inputs;
};

// Residual of the net for the given (cubic-upsampled) input. The prediction
// is input + residual. Pass a tape to enable backward().
Tensor forward(const TsrNet& net, const Tensor& input, ForwardTape* tape = nullptr);

struct LayerGrads {
    std::vector<float> gw;
    std::vector<float> gb;
};

// Analytic gradients of every weight and bias given d(loss)/d(residual).
// Gradient w.r.t. the net input is not computed.
std::vector<LayerGrads> backward(const TsrNet& net, const ForwardTape& tape,
                                 const Tensor& d_residual);

// Mean squared error over all samples plus its gradient w.r.t. pred.
double l2_loss(const Tensor& pred, const Tensor& target, Tensor& d_pred);

// Cubic x`factor` temporal upsample plus the learned residual, processed in
// temporal tiles with a halo equal to the receptive-field radius so the
// seams match the untiled result. tile_frames <= 0 picks a default.
VideoVolume apply_net(const TsrNet& net, const VideoVolume& ltr, int factor = 2,
                      int tile_frames = 0);

// Checkpoint: "TSRN", u32le header length, JSON header (layer specs, seed,
// iteration), then float32le payloads per layer (weights then bias).
void save_checkpoint(const TsrNet& net, std::int64_t iteration, const std::string& path);
struct Checkpoint {
    TsrNet net;
    std::int64_t iteration = 0;
};
Checkpoint load_checkpoint(const std::string& path);

} // namespace tsr
