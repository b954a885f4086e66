#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ergokit/nn/model.hpp"

namespace ergokit::nn {

struct TrainConfig {
    double learning_rate = 1e-3;
    int batch_size = 32;
    int epochs = 1;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    // Decoupled weight decay per step (0 disables); biases are not decayed.
    double weight_decay = 0.0;
    // Training-time occlusion augmentation: per step, each present keypoint
    // is additionally dropped with probability `augment_drop_prob`, and with
    // probability `augment_limb_prob` one whole limb chain is dropped.
    // Regularizes against memorizing per-sample mask patterns and trains
    // the hidden-limb inference path. Both default off.
    double augment_drop_prob = 0.0;
    double augment_limb_prob = 0.0;
    std::uint64_t seed = 0;
    bool shuffle = true;
    // Stop once the running train RMSE (degrees) drops to this level;
    // 0 disables early stopping.
    double early_stop_rmse = 0.0;
};

struct EpochStats {
    // Running estimate accumulated from batch losses during the epoch.
    double train_rmse = 0.0;
    // Full pass at epoch end; negative when no validation set was given.
    double val_rmse = -1.0;
};

struct TrainHistory {
    std::vector<EpochStats> epochs;
};

// Mini-batch Adam on MSE over angle/180 targets. Mutates exactly this
// model; deterministic given config.seed regardless of thread count.
// Throws DivergedLoss when the loss stops being finite.
TrainHistory train(AngleModel& model, std::span<const LabeledTensor> train_set,
                   std::span<const LabeledTensor> validation_set,
                   const TrainConfig& config);

// RMSE in degrees of the model's clamped predictions over a set.
double rmse_degrees(const AngleModel& model,
                    std::span<const LabeledTensor> set);

}  // namespace ergokit::nn
