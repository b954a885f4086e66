#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ergokit/angles.hpp"
#include "ergokit/features.hpp"
#include "ergokit/nn/arch.hpp"

namespace ergokit::nn {

struct TrainingMeta {
    int epochs = 0;
    double final_train_rmse = -1.0;  // degrees; -1 = not trained
    double final_val_rmse = -1.0;
};

// One per-angle regressor: the architecture plus its flat weight vector.
// The raw output is the angle divided by 180.
struct AngleModel {
    AngleName angle = AngleName::EL;
    ArchSpec arch;
    std::vector<double> params;
    std::uint64_t seed = 0;
    TrainingMeta meta;
};

// Grid input consumed by the layers; the full architecture wraps a
// RelationTensor, the downsized one is built directly by tests.
struct InputGrid {
    int grid = 0;
    int channels = 0;
    std::vector<double> features;  // (y, x, c) row-major
    std::vector<double> mask;      // (y, x) row-major

    static InputGrid from_relation(const RelationTensor& tensor);
};

// Deterministic per (angle, seed): uniform(-sqrt(6/fan_in), +sqrt(6/fan_in))
// weights, zero biases.
AngleModel init_model(AngleName angle, std::uint64_t seed,
                      const ArchSpec& arch = ArchSpec::full());

// Test constructor: all weights and biases zero.
AngleModel zero_model(AngleName angle, const ArchSpec& arch = ArchSpec::full());

// Raw network output (angle/180 scale, unclamped).
double forward_raw(const AngleModel& model, const InputGrid& input);

// Predicted angle in degrees, clamped to [0, 180]. Throws ShapeMismatch
// when the tensor does not fit the model architecture.
double forward(const AngleModel& model, const RelationTensor& tensor);

struct LabeledTensor {
    const RelationTensor* tensor = nullptr;
    double truth_degrees = 0.0;
};

struct LabeledGrid {
    const InputGrid* input = nullptr;
    double truth_degrees = 0.0;
};

// Mean squared error over the batch on angle/180 targets plus exact
// analytic gradients for every parameter. Per-sample gradients may be
// computed in parallel; they are reduced in sample order, so the result
// is bitwise independent of thread count.
double loss_and_gradients(const AngleModel& model,
                          std::span<const LabeledTensor> batch,
                          std::vector<double>& grad_out);
double loss_and_gradients_grids(const AngleModel& model,
                                std::span<const LabeledGrid> batch,
                                std::vector<double>& grad_out);

enum class CheckArch { Full, Downsized };

// Compares analytic gradients against central finite differences
// (step 1e-5) on a seeded random model and input; returns the maximum
// relative error over all parameters.
double gradient_check(CheckArch which, std::uint64_t seed);

}  // namespace ergokit::nn
