#include "tsr/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "tsr/kernels/conv3d.hpp"
#include "tsr/resample.hpp"
#include "tsr/rng.hpp"

using nlohmann::json;

namespace tsr {

namespace {

void validate_specs(const std::vector<ConvLayerSpec>& specs) {
    if (specs.empty()) throw input_error("net needs at least one layer");
    for (std::size_t k = 0; k < specs.size(); ++k) {
        const auto& s = specs[k];
        if (s.in_channels < 1 || s.out_channels < 1)
            throw input_error("layer channel counts must be >= 1");
        if (s.kt < 1 || s.ky < 1 || s.kx < 1)
            throw input_error("kernel dims must be >= 1");
        if (k > 0 && specs[k - 1].out_channels != s.in_channels)
            throw input_error("layer channel counts do not chain");
    }
}

kern::Conv3dShape shape_for(const ConvLayerSpec& spec, const Tensor& input) {
    return {spec.out_channels, spec.in_channels, spec.kt, spec.ky, spec.kx,
            input.t,           input.y,          input.x};
}

} // namespace

std::vector<ConvLayerSpec> paper_layer_specs(int video_channels, int width) {
    if (video_channels != 1 && video_channels != 3)
        throw input_error("video channels must be 1 or 3");
    if (width < 1) throw input_error("net width must be >= 1");
    std::vector<ConvLayerSpec> specs;
    for (int k = 0; k < 8; ++k) {
        ConvLayerSpec s;
        s.in_channels = k == 0 ? video_channels : width;
        s.out_channels = k == 7 ? video_channels : width;
        s.kt = k < 4 ? 3 : 1;
        s.ky = s.kx = 3;
        s.relu = k != 7;
        specs.push_back(s);
    }
    return specs;
}

TsrNet make_net(const std::vector<ConvLayerSpec>& specs, std::uint64_t seed) {
    validate_specs(specs);
    TsrNet net;
    net.video_channels = specs.front().in_channels;
    net.init_seed = seed;
    Rng rng(seed);
    for (const auto& spec : specs) {
        ConvLayer layer;
        layer.spec = spec;
        const std::size_t taps =
            static_cast<std::size_t>(spec.kt) * spec.ky * spec.kx;
        const double fan_in = static_cast<double>(spec.in_channels) * taps;
        const double fan_out = static_cast<double>(spec.out_channels) * taps;
        const double bound = std::sqrt(6.0 / (fan_in + fan_out));
        layer.w.resize(layer.weight_count());
        for (auto& w : layer.w)
            w = static_cast<float>(rng.uniform(-bound, bound));
        layer.b.assign(spec.out_channels, 0.0f);
        net.layers.push_back(std::move(layer));
    }
    return net;
}

TsrNet make_tsr_net(int video_channels, int width, std::uint64_t seed) {
    return make_net(paper_layer_specs(video_channels, width), seed);
}

std::array<int, 3> receptive_field_extent(const std::vector<ConvLayerSpec>& specs) {
    std::array<int, 3> ext{1, 1, 1};
    for (const auto& s : specs) {
        ext[0] += s.kt - 1;
        ext[1] += s.ky - 1;
        ext[2] += s.kx - 1;
    }
    return ext;
}

Tensor forward(const TsrNet& net, const Tensor& input, ForwardTape* tape) {
    if (input.c != net.video_channels)
        throw input_error("input channel count does not match the net");
    for (const auto& layer : net.layers) {
        if (input.t < layer.spec.kt || input.y < layer.spec.ky || input.x < layer.spec.kx)
            throw input_error("input dims below kernel support");
    }
    if (tape) tape->inputs.clear();

    Tensor cur = input;
    for (std::size_t k = 0; k < net.layers.size(); ++k) {
        const ConvLayer& layer = net.layers[k];
        if (tape) tape->inputs.push_back(cur);
        const Tensor padded =
            replicate_pad(cur, layer.spec.kt / 2, layer.spec.ky / 2, layer.spec.kx / 2);
        Tensor out = make_tensor(layer.spec.out_channels, cur.t, cur.y, cur.x);
        kern::conv3d_forward(out.v.data(), padded.v.data(), layer.w.data(),
                             layer.b.data(), shape_for(layer.spec, cur));
        if (layer.spec.relu)
            for (auto& v : out.v) v = v > 0.0f ? v : 0.0f;
        cur = std::move(out);
    }
    return cur;
}

namespace {

// Gradient w.r.t. a layer's (padded) input: valid conv of the zero-padded
// output gradient with the spatially flipped, channel-transposed weights.
Tensor conv_grad_input_padded(const ConvLayer& layer, const Tensor& gout) {
    const auto& s = layer.spec;
    std::vector<float> wflip(layer.w.size());
    const std::size_t taps = static_cast<std::size_t>(s.kt) * s.ky * s.kx;
    for (int o = 0; o < s.out_channels; ++o)
        for (int i = 0; i < s.in_channels; ++i)
            for (int dt = 0; dt < s.kt; ++dt)
                for (int dy = 0; dy < s.ky; ++dy)
                    for (int dx = 0; dx < s.kx; ++dx) {
                        const std::size_t src =
                            (static_cast<std::size_t>(o) * s.in_channels + i) * taps +
                            (static_cast<std::size_t>(dt) * s.ky + dy) * s.kx + dx;
                        const std::size_t dst =
                            (static_cast<std::size_t>(i) * s.out_channels + o) * taps +
                            (static_cast<std::size_t>(s.kt - 1 - dt) * s.ky +
                             (s.ky - 1 - dy)) *
                                s.kx +
                            (s.kx - 1 - dx);
                        wflip[dst] = layer.w[src];
                    }
    const Tensor gpad_in = zero_pad(gout, s.kt - 1, s.ky - 1, s.kx - 1);
    Tensor gin = make_tensor(s.in_channels, gout.t + s.kt - 1, gout.y + s.ky - 1,
                             gout.x + s.kx - 1);
    std::vector<float> zero_bias(s.in_channels, 0.0f);
    const kern::Conv3dShape ks{s.in_channels, s.out_channels, s.kt, s.ky, s.kx,
                               gin.t,          gin.y,          gin.x};
    kern::conv3d_forward(gin.v.data(), gpad_in.v.data(), wflip.data(), zero_bias.data(),
                         ks);
    return gin;
}

} // namespace

std::vector<LayerGrads> backward(const TsrNet& net, const ForwardTape& tape,
                                 const Tensor& d_residual) {
    if (tape.inputs.size() != net.layers.size())
        throw input_error("tape does not match the net");
    std::vector<LayerGrads> grads(net.layers.size());

    Tensor g = d_residual;
    for (int k = static_cast<int>(net.layers.size()) - 1; k >= 0; --k) {
        const ConvLayer& layer = net.layers[k];
        const Tensor& lin = tape.inputs[k];
        if (!(lin.t == g.t && lin.y == g.y && lin.x == g.x))
            throw input_error("stale tape: activation dims do not match");
        const Tensor padded =
            replicate_pad(lin, layer.spec.kt / 2, layer.spec.ky / 2, layer.spec.kx / 2);
        grads[k].gw.resize(layer.w.size());
        grads[k].gb.resize(layer.b.size());
        kern::conv3d_grad_weights(grads[k].gw.data(), grads[k].gb.data(), g.v.data(),
                                  padded.v.data(), shape_for(layer.spec, lin));
        if (k == 0) break; // gradient w.r.t. the net input is not needed
        const Tensor gpad = conv_grad_input_padded(layer, g);
        g = fold_replicate_pad(gpad, layer.spec.kt / 2, layer.spec.ky / 2,
                               layer.spec.kx / 2);
        if (net.layers[k - 1].spec.relu) {
            const Tensor& act = tape.inputs[k]; // post-ReLU output of layer k-1
            for (std::size_t i = 0; i < g.v.size(); ++i)
                if (act.v[i] <= 0.0f) g.v[i] = 0.0f;
        }
    }
    return grads;
}

double l2_loss(const Tensor& pred, const Tensor& target, Tensor& d_pred) {
    if (!pred.same_shape(target)) throw input_error("l2 loss dim mismatch");
    d_pred = make_tensor(pred.c, pred.t, pred.y, pred.x);
    const double inv_n = 1.0 / static_cast<double>(pred.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.v.size(); ++i) {
        const double d = static_cast<double>(pred.v[i]) - target.v[i];
        acc += d * d;
        d_pred.v[i] = static_cast<float>(2.0 * d * inv_n);
    }
    return acc * inv_n;
}

VideoVolume apply_net(const TsrNet& net, const VideoVolume& ltr, int factor,
                      int tile_frames) {
    std::vector<ConvLayerSpec> specs;
    for (const auto& l : net.layers) specs.push_back(l.spec);
    const int halo = (receptive_field_extent(specs)[0] - 1) / 2;

    const VideoVolume up = temporal_cubic_upsample(ltr, factor);
    if (tile_frames <= 0) tile_frames = std::max(16, 4 * halo);

    VideoVolume out = make_volume(up.frames, up.height, up.width, up.channels);
    for (int start = 0; start < up.frames; start += tile_frames) {
        const int stop = std::min(start + tile_frames, up.frames);
        const int ext_start = std::max(0, start - halo);
        const int ext_stop = std::min(up.frames, stop + halo);
        const VideoVolume tile = crop(up, {ext_start, 0, 0},
                                      {ext_stop - ext_start, up.height, up.width});
        const Tensor residual = forward(net, to_planar(tile));
        for (int t = start; t < stop; ++t)
            for (int y = 0; y < up.height; ++y)
                for (int x = 0; x < up.width; ++x)
                    for (int c = 0; c < up.channels; ++c)
                        out.at(t, y, x, c) =
                            up.at(t, y, x, c) +
                            residual.at(c, t - ext_start, y, x);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Checkpoints

void save_checkpoint(const TsrNet& net, std::int64_t iteration, const std::string& path) {
    json header;
    header["format"] = 1;
    header["video_channels"] = net.video_channels;
    header["seed"] = net.init_seed;
    header["iteration"] = iteration;
    header["layers"] = json::array();
    for (const auto& l : net.layers)
        header["layers"].push_back({{"in", l.spec.in_channels},
                                    {"out", l.spec.out_channels},
                                    {"kt", l.spec.kt},
                                    {"ky", l.spec.ky},
                                    {"kx", l.spec.kx},
                                    {"relu", l.spec.relu}});
    const std::string htext = header.dump();

    std::ofstream os(path, std::ios::binary);
    if (!os) throw input_error("cannot open checkpoint for writing: " + path);
    os.write("TSRN", 4);
    const std::uint32_t hlen = static_cast<std::uint32_t>(htext.size());
    unsigned char lb[4] = {static_cast<unsigned char>(hlen & 0xff),
                           static_cast<unsigned char>((hlen >> 8) & 0xff),
                           static_cast<unsigned char>((hlen >> 16) & 0xff),
                           static_cast<unsigned char>((hlen >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(lb), 4);
    os.write(htext.data(), static_cast<std::streamsize>(htext.size()));
    for (const auto& l : net.layers) {
        os.write(reinterpret_cast<const char*>(l.w.data()),
                 static_cast<std::streamsize>(l.w.size() * sizeof(float)));
        os.write(reinterpret_cast<const char*>(l.b.data()),
                 static_cast<std::streamsize>(l.b.size() * sizeof(float)));
    }
    if (!os) throw input_error("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw input_error("cannot open checkpoint: " + path);
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "TSRN", 4) != 0)
        throw input_error("bad checkpoint magic: " + path);
    unsigned char lb[4];
    if (!is.read(reinterpret_cast<char*>(lb), 4))
        throw input_error("truncated checkpoint: " + path);
    const std::uint32_t hlen = static_cast<std::uint32_t>(lb[0]) | (lb[1] << 8) |
                               (lb[2] << 16) | (static_cast<std::uint32_t>(lb[3]) << 24);
    if (hlen > (1u << 20)) throw input_error("oversized checkpoint header: " + path);
    std::string htext(hlen, '\0');
    if (!is.read(htext.data(), hlen)) throw input_error("truncated checkpoint: " + path);

    json header = json::parse(htext, nullptr, false);
    if (header.is_discarded()) throw input_error("unparseable checkpoint header: " + path);

    Checkpoint ck;
    ck.iteration = header.at("iteration").get<std::int64_t>();
    ck.net.video_channels = header.at("video_channels").get<int>();
    ck.net.init_seed = header.at("seed").get<std::uint64_t>();
    for (const auto& jl : header.at("layers")) {
        ConvLayer l;
        l.spec.in_channels = jl.at("in").get<int>();
        l.spec.out_channels = jl.at("out").get<int>();
        l.spec.kt = jl.at("kt").get<int>();
        l.spec.ky = jl.at("ky").get<int>();
        l.spec.kx = jl.at("kx").get<int>();
        l.spec.relu = jl.at("relu").get<bool>();
        l.w.resize(l.weight_count());
        l.b.resize(l.spec.out_channels);
        if (!is.read(reinterpret_cast<char*>(l.w.data()),
                     static_cast<std::streamsize>(l.w.size() * sizeof(float))) ||
            !is.read(reinterpret_cast<char*>(l.b.data()),
                     static_cast<std::streamsize>(l.b.size() * sizeof(float))))
            throw input_error("truncated checkpoint payload: " + path);
        ck.net.layers.push_back(std::move(l));
    }
    std::vector<ConvLayerSpec> specs;
    for (const auto& l : ck.net.layers) specs.push_back(l.spec);
    validate_specs(specs);
    return ck;
}

} // namespace tsr
