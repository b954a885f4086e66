#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "ergokit/nn/model.hpp"
#include "ergokit/synthgen.hpp"

namespace ergokit::nn {

using ModelSet = std::map<AngleName, AngleModel>;

struct SplitMetrics {
    double mae = 0.0;   // degrees
    double rmse = 0.0;  // degrees
    std::int64_t n = 0;
};

struct EvalReport {
    struct Row {
        SplitMetrics train;
        SplitMetrics test;
    };
    std::array<Row, kNumAngles> per_angle{};
    // Pooled over every (sample, angle) prediction, not an average of
    // per-angle averages.
    SplitMetrics aggregate_train;
    SplitMetrics aggregate_test;
    std::int64_t dropped_train = 0;
    std::int64_t dropped_test = 0;
};

// Throws MissingModel (naming the absent angles) unless all 16 are given.
void require_complete(const ModelSet& models);

// One prediction per angle, each clamped to [0, 180]. Propagates
// NoAnchor / TooFewKeypoints from normalization.
JointAngleSet predict_all(const ModelSet& models, const PoseFrame& frame);

// Per-angle and pooled MAE/RMSE on both splits; samples whose tensor
// construction fails are excluded and counted.
EvalReport evaluate(const ModelSet& models,
                    const std::vector<PoseSample>& train_samples,
                    const std::vector<PoseSample>& test_samples);

}  // namespace ergokit::nn
