#include "tsr/optim.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "tsr/resample.hpp"

namespace tsr {

AdamState make_adam_state(const TsrNet& net, double lr, AdamConfig cfg) {
    if (!(lr > 0.0)) throw input_error("learning rate must be positive");
    AdamState st;
    st.lr = lr;
    st.cfg = cfg;
    for (const auto& layer : net.layers) {
        AdamState::Moments m;
        m.m_w.assign(layer.w.size(), 0.0f);
        m.v_w.assign(layer.w.size(), 0.0f);
        m.m_b.assign(layer.b.size(), 0.0f);
        m.v_b.assign(layer.b.size(), 0.0f);
        st.layers.push_back(std::move(m));
    }
    return st;
}

namespace {

void adam_update(std::vector<float>& p, const std::vector<float>& g, std::vector<float>& m,
                 std::vector<float>& v, const AdamConfig& cfg, double lr, double bc1,
                 double bc2) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double gi = g[i];
        if (!std::isfinite(gi))
            throw train_error("non-finite gradient encountered; aborting training");
        const double mi = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * gi;
        const double vi = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * gi * gi;
        m[i] = static_cast<float>(mi);
        v[i] = static_cast<float>(vi);
        const double mhat = mi / bc1;
        const double vhat = vi / bc2;
        p[i] = static_cast<float>(p[i] - lr * mhat / (std::sqrt(vhat) + cfg.eps));
    }
}

} // namespace

void adam_step(TsrNet& net, const std::vector<LayerGrads>& grads, AdamState& state) {
    if (grads.size() != net.layers.size() || state.layers.size() != net.layers.size())
        throw input_error("adam state/gradient shape mismatch");
    state.step += 1;
    const double bc1 = 1.0 - std::pow(state.cfg.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.cfg.beta2, static_cast<double>(state.step));
    for (std::size_t k = 0; k < net.layers.size(); ++k) {
        adam_update(net.layers[k].w, grads[k].gw, state.layers[k].m_w, state.layers[k].v_w,
                    state.cfg, state.lr, bc1, bc2);
        adam_update(net.layers[k].b, grads[k].gb, state.layers[k].m_b, state.layers[k].v_b,
                    state.cfg, state.lr, bc1, bc2);
    }
}

ScheduleDecision schedule_check(const std::vector<double>& history, const LrSchedule& sched,
                                double current_lr) {
    ScheduleDecision d;
    const int W = sched.window;
    if (static_cast<int>(history.size()) < W) return d;

    // Least-squares line through the last W losses.
    const double* h = history.data() + history.size() - W;
    double mean_x = (W - 1) / 2.0, mean_y = 0.0;
    for (int i = 0; i < W; ++i) mean_y += h[i];
    mean_y /= W;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < W; ++i) {
        const double dx = i - mean_x;
        sxx += dx * dx;
        sxy += dx * (h[i] - mean_y);
    }
    const double slope = sxy / sxx;
    double ss_res = 0.0;
    for (int i = 0; i < W; ++i) {
        const double fit = mean_y + slope * (i - mean_x);
        const double r = h[i] - fit;
        ss_res += r * r;
    }
    const double sigma = std::sqrt(ss_res / W);

    // Plateau: the fitted decrease across the window is lost in the noise.
    if (std::abs(slope) * W < sigma) {
        const double next = current_lr / sched.drop_factor;
        if (next < sched.floor) {
            d.stop = true;
        } else {
            d.drop = true;
            d.new_lr = next;
        }
    }
    return d;
}

TrainResult train(TsrNet net, const std::vector<PyramidLevel>& levels,
                  const SamplerConfig& sampler_cfg, const TrainConfig& cfg) {
    if (cfg.max_iterations < 0) throw input_error("max_iterations must be >= 0");
    PairSampler sampler(levels, sampler_cfg);
    AdamState state = make_adam_state(net, cfg.schedule.initial, cfg.adam);

    std::ofstream log;
    if (!cfg.loss_log_path.empty()) {
        log.open(cfg.loss_log_path);
        if (!log) throw input_error("cannot open loss log: " + cfg.loss_log_path);
    }

    TrainResult result;
    ForwardTape tape;
    Tensor d_pred;
    for (std::int64_t it = 1; it <= cfg.max_iterations; ++it) {
        const ExamplePair pair = sampler.next();
        const Tensor input = to_planar(temporal_cubic_upsample(pair.ltr, 2));
        const Tensor target = to_planar(pair.htr);

        const Tensor residual = forward(net, input, &tape);
        Tensor pred = input;
        for (std::size_t i = 0; i < pred.v.size(); ++i) pred.v[i] += residual.v[i];

        const double loss = l2_loss(pred, target, d_pred);
        if (!std::isfinite(loss)) {
            std::ostringstream msg;
            msg << "non-finite loss at iteration " << it << " (level " << pair.level_id
                << ", origin " << pair.origin[0] << "," << pair.origin[1] << ","
                << pair.origin[2] << ")";
            throw train_error(msg.str());
        }

        const auto grads = backward(net, tape, d_pred);
        adam_step(net, grads, state);

        result.loss_history.push_back(loss);
        result.iterations = it;
        if (log) {
            char line[96];
            std::snprintf(line, sizeof(line), "%lld,%.9e,%.3e\n",
                          static_cast<long long>(it), loss, state.lr);
            log << line;
        }

        if (cfg.schedule.period > 0 && it % cfg.schedule.period == 0) {
            const auto d = schedule_check(result.loss_history, cfg.schedule, state.lr);
            if (d.drop) {
                state.lr = d.new_lr;
                result.lr_drops.emplace_back(it, state.lr);
                if (!cfg.checkpoint_path.empty())
                    save_checkpoint(net, it, cfg.checkpoint_path);
            } else if (d.stop) {
                result.stopped_by_schedule = true;
                break;
            }
        }
    }

    if (!cfg.checkpoint_path.empty())
        save_checkpoint(net, result.iterations, cfg.checkpoint_path);
    result.net = std::move(net);
    return result;
}

} // namespace tsr
