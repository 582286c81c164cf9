#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsr/dataset.hpp"
#include "tsr/model.hpp"

namespace tsr {

struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Per-parameter first/second moments, mirrored over the net's layers.
struct AdamState {
    struct Moments {
        std::vector<float> m_w, v_w, m_b, v_b;
    };
    std::vector<Moments> layers;
    std::int64_t step = 0;
    double lr = 1e-4;
    AdamConfig cfg;
};

AdamState make_adam_state(const TsrNet& net, double lr, AdamConfig cfg = {});

// One Adam update with bias correction:
//   m <- b1*m + (1-b1)*g;  v <- b2*v + (1-b2)*g^2;  p <- p - lr*m^/(sqrt(v^)+eps)
// Throws train_error on non-finite gradients.
void adam_step(TsrNet& net, const std::vector<LayerGrads>& grads, AdamState& state);

// Adaptive learning-rate schedule: every `period` iterations, once `window`
// losses exist, fit a least-squares line to the last `window` losses; when
// the fitted decrease over the window is smaller than the residual std the
// loss has plateaued and lr drops by `drop_factor`. Training stops when the
// next drop would fall below `floor`.
struct LrSchedule {
    double initial = 1e-4;
    double floor = 1e-6;
    int period = 50;
    int window = 200;
    double drop_factor = 10.0;
};

struct ScheduleDecision {
    bool drop = false;
    bool stop = false;
    double new_lr = 0.0;
};

ScheduleDecision schedule_check(const std::vector<double>& history,
                                const LrSchedule& sched, double current_lr);

struct TrainConfig {
    std::int64_t max_iterations = 20000;
    LrSchedule schedule;
    AdamConfig adam;
    std::uint64_t seed = 0;
    std::string loss_log_path;       // CSV "iteration,loss,lr"; empty = no log
    std::string checkpoint_path;     // written at lr drops and completion; empty = none
};

struct TrainResult {
    TsrNet net;
    std::vector<double> loss_history;
    std::vector<std::pair<std::int64_t, double>> lr_drops; // (iteration, new lr)
    std::int64_t iterations = 0;
    bool stopped_by_schedule = false;
};

// The TSRx2 training loop: sample a crop pair, cubic-upsample the LTR side
// x2 in time, forward, l2 against the HTR side, backward, Adam, periodic
// schedule check. Deterministic given the seeds.
TrainResult train(TsrNet net, const std::vector<PyramidLevel>& levels,
                  const SamplerConfig& sampler_cfg, const TrainConfig& cfg);

} // namespace tsr
