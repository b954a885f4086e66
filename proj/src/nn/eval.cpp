#include "ergokit/nn/eval.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ergokit/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ergokit::nn {

void require_complete(const ModelSet& models) {
    std::string missing;
    for (AngleName name : kAllAngles) {
        if (models.find(name) == models.end()) {
            if (!missing.empty()) missing += ", ";
            missing += angle_acronym(name);
        }
    }
    if (!missing.empty()) {
        throw MissingModel("no model for: " + missing);
    }
}

JointAngleSet predict_all(const ModelSet& models, const PoseFrame& frame) {
    require_complete(models);
    const RelationTensor tensor = frame_tensor(frame);
    const InputGrid input = InputGrid::from_relation(tensor);
    JointAngleSet out;
    for (AngleName name : kAllAngles) {
        const double raw = forward_raw(models.at(name), input);
        out[name] = std::clamp(raw * 180.0, 0.0, 180.0);
    }
    return out;
}

namespace {

struct Accumulator {
    double abs_sum = 0.0;
    double sq_sum = 0.0;
    std::int64_t n = 0;

    void add(double err) {
        abs_sum += std::abs(err);
        sq_sum += err * err;
        n += 1;
    }
    SplitMetrics metrics() const {
        SplitMetrics m;
        m.n = n;
        if (n > 0) {
            m.mae = abs_sum / static_cast<double>(n);
            m.rmse = std::sqrt(sq_sum / static_cast<double>(n));
        }
        return m;
    }
};

void eval_split(const ModelSet& models, const std::vector<PoseSample>& samples,
                std::array<Accumulator, kNumAngles>& per_angle,
                Accumulator& pooled, std::int64_t& dropped) {
    const TensorBatch batch = batch_tensors(samples);
    dropped = static_cast<std::int64_t>(batch.drops.size());
    const std::int64_t n = static_cast<std::int64_t>(batch.items.size());

    // errors[sample][angle]; reduced in sample order afterwards.
    std::vector<std::array<double, kNumAngles>> errors(static_cast<std::size_t>(n));

#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto& item = batch.items[static_cast<std::size_t>(i)];
        const InputGrid input = InputGrid::from_relation(item.tensor);
        for (AngleName name : kAllAngles) {
            const auto& truth = item.truth[name];
            double err = std::numeric_limits<double>::quiet_NaN();
            if (truth) {
                const double raw = forward_raw(models.at(name), input);
                const double pred = std::clamp(raw * 180.0, 0.0, 180.0);
                err = pred - *truth;
            }
            errors[static_cast<std::size_t>(i)][static_cast<std::size_t>(name)] = err;
        }
    }

    for (std::int64_t i = 0; i < n; ++i) {
        for (AngleName name : kAllAngles) {
            const double err =
                errors[static_cast<std::size_t>(i)][static_cast<std::size_t>(name)];
            if (std::isnan(err)) continue;  // no truth label for this pair
            per_angle[static_cast<std::size_t>(name)].add(err);
            pooled.add(err);
        }
    }
}

}  // namespace

EvalReport evaluate(const ModelSet& models,
                    const std::vector<PoseSample>& train_samples,
                    const std::vector<PoseSample>& test_samples) {
    require_complete(models);

    std::array<Accumulator, kNumAngles> train_acc{}, test_acc{};
    Accumulator train_pooled, test_pooled;
    EvalReport report;
    eval_split(models, train_samples, train_acc, train_pooled,
               report.dropped_train);
    eval_split(models, test_samples, test_acc, test_pooled,
               report.dropped_test);

    for (AngleName name : kAllAngles) {
        const auto idx = static_cast<std::size_t>(name);
        report.per_angle[idx].train = train_acc[idx].metrics();
        report.per_angle[idx].test = test_acc[idx].metrics();
    }
    report.aggregate_train = train_pooled.metrics();
    report.aggregate_test = test_pooled.metrics();
    return report;
}

}  // namespace ergokit::nn
