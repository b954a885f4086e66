#include "ergokit/nn/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ergokit/errors.hpp"
#include "ergokit/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ergokit::nn {

namespace {

constexpr std::uint64_t kShuffleStreamTag = 0x73687566666c6531ULL;
constexpr std::uint64_t kAugmentStreamTag = 0x6175676d656e7431ULL;

struct Adam {
    std::vector<double> m;
    std::vector<double> v;
    std::int64_t t = 0;

    explicit Adam(std::size_t n) : m(n, 0.0), v(n, 0.0) {}

    void step(std::vector<double>& params, const std::vector<double>& grad,
              const TrainConfig& cfg, const std::vector<char>& decayable) {
        ++t;
        const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
        const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
        for (std::size_t i = 0; i < params.size(); ++i) {
            m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * grad[i];
            v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
            const double m_hat = m[i] / bc1;
            const double v_hat = v[i] / bc2;
            params[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
            if (cfg.weight_decay > 0.0 && decayable[i]) {
                params[i] -= cfg.learning_rate * cfg.weight_decay * params[i];
            }
        }
    }
};

// Marks weight entries (1) versus biases (0).
std::vector<char> decay_mask(const ArchSpec& a) {
    const ParamLayout l(a);
    std::vector<char> mask(l.total, 1);
    auto clear = [&mask](std::size_t offset, std::size_t count) {
        for (std::size_t i = 0; i < count; ++i) mask[offset + i] = 0;
    };
    clear(l.conv_a_b, static_cast<std::size_t>(a.conv_a));
    clear(l.pw_b, static_cast<std::size_t>(a.pointwise));
    clear(l.conv_b_b, static_cast<std::size_t>(a.conv_b));
    clear(l.conv_c_b, static_cast<std::size_t>(a.conv_c));
    clear(l.dense1_b, static_cast<std::size_t>(a.hidden));
    clear(l.dense2_b, 1);
    return mask;
}

// Zeroes keypoint `kp`'s row and column in both features and mask.
void drop_keypoint(InputGrid& grid, int kp) {
    const int g = grid.grid;
    const int c = grid.channels;
    for (int j = 0; j < g; ++j) {
        grid.mask[static_cast<std::size_t>(kp) * g + j] = 0.0;
        grid.mask[static_cast<std::size_t>(j) * g + kp] = 0.0;
        for (int ch = 0; ch < c; ++ch) {
            grid.features[(static_cast<std::size_t>(kp) * g + j) * c + ch] = 0.0;
            grid.features[(static_cast<std::size_t>(j) * g + kp) * c + ch] = 0.0;
        }
    }
}

void augment_grid(InputGrid& grid, Rng& rng, const TrainConfig& cfg) {
    if (cfg.augment_limb_prob > 0.0 && rng.uniform() < cfg.augment_limb_prob) {
        const auto chain = static_cast<LimbChain>(rng.uniform_index(5));
        int count = 0;
        const auto& ids = chain_keypoints(chain, count);
        for (int k = 0; k < count; ++k) {
            if (ids[static_cast<std::size_t>(k)] < grid.grid) {
                drop_keypoint(grid, ids[static_cast<std::size_t>(k)]);
            }
        }
    }
    if (cfg.augment_drop_prob > 0.0) {
        for (int kp = 0; kp < grid.grid; ++kp) {
            if (rng.uniform() < cfg.augment_drop_prob) drop_keypoint(grid, kp);
        }
    }
}

std::vector<LabeledGrid> to_grids(std::span<const LabeledTensor> set,
                                  std::vector<InputGrid>& storage) {
    storage.clear();
    storage.reserve(set.size());
    std::vector<LabeledGrid> out;
    out.reserve(set.size());
    for (const LabeledTensor& item : set) {
        storage.push_back(InputGrid::from_relation(*item.tensor));
    }
    for (std::size_t i = 0; i < set.size(); ++i) {
        out.push_back({&storage[i], set[i].truth_degrees});
    }
    return out;
}

double set_rmse(const AngleModel& model, std::span<const LabeledGrid> set) {
    if (set.empty()) return -1.0;
    const std::int64_t n = static_cast<std::int64_t>(set.size());
    std::vector<double> sq(static_cast<std::size_t>(n), 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const LabeledGrid& item = set[static_cast<std::size_t>(i)];
        const double raw = forward_raw(model, *item.input);
        const double pred = std::clamp(raw * 180.0, 0.0, 180.0);
        const double err = pred - item.truth_degrees;
        sq[static_cast<std::size_t>(i)] = err * err;
    }
    const double mean = std::accumulate(sq.begin(), sq.end(), 0.0) /
                        static_cast<double>(n);
    return std::sqrt(mean);
}

}  // namespace

double rmse_degrees(const AngleModel& model,
                    std::span<const LabeledTensor> set) {
    std::vector<InputGrid> storage;
    const auto grids = to_grids(set, storage);
    return set_rmse(model, grids);
}

TrainHistory train(AngleModel& model, std::span<const LabeledTensor> train_set,
                   std::span<const LabeledTensor> validation_set,
                   const TrainConfig& config) {
    if (train_set.empty()) throw Error("train: empty training set");
    if (config.batch_size <= 0) throw Error("train: batch_size must be positive");

    std::vector<InputGrid> train_storage;
    const auto train_grids = to_grids(train_set, train_storage);
    std::vector<InputGrid> val_storage;
    const auto val_grids = to_grids(validation_set, val_storage);

    const std::size_t n = train_grids.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    Adam adam(model.params.size());
    const std::vector<char> decayable = decay_mask(model.arch);
    std::vector<double> grad;
    std::vector<LabeledGrid> batch;
    std::vector<InputGrid> augmented;
    TrainHistory history;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        if (config.shuffle) {
            Rng rng = Rng::derive(config.seed ^ kShuffleStreamTag,
                                  static_cast<std::uint64_t>(epoch));
            for (std::size_t i = n - 1; i > 0; --i) {
                const std::size_t j = rng.uniform_index(i + 1);
                std::swap(order[i], order[j]);
            }
        }

        const bool augmenting =
            config.augment_drop_prob > 0.0 || config.augment_limb_prob > 0.0;
        Rng augment_rng = Rng::derive(config.seed ^ kAugmentStreamTag,
                                      static_cast<std::uint64_t>(epoch));

        double sq_sum = 0.0;
        for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t end =
                std::min(n, start + static_cast<std::size_t>(config.batch_size));
            batch.clear();
            if (augmenting) {
                // Augmented copies are drawn serially in batch order, so the
                // stream stays independent of gradient-pass threading.
                augmented.resize(end - start);
                for (std::size_t k = start; k < end; ++k) {
                    const LabeledGrid& base = train_grids[order[k]];
                    InputGrid& copy = augmented[k - start];
                    copy = *base.input;
                    augment_grid(copy, augment_rng, config);
                    batch.push_back({&copy, base.truth_degrees});
                }
            } else {
                for (std::size_t k = start; k < end; ++k) {
                    batch.push_back(train_grids[order[k]]);
                }
            }
            const double loss = loss_and_gradients_grids(model, batch, grad);
            if (!std::isfinite(loss)) {
                throw DivergedLoss("loss became non-finite at epoch " +
                                   std::to_string(epoch));
            }
            sq_sum += loss * static_cast<double>(batch.size());
            adam.step(model.params, grad, config, decayable);
        }

        EpochStats stats;
        stats.train_rmse = std::sqrt(sq_sum / static_cast<double>(n)) * 180.0;
        stats.val_rmse = set_rmse(model, val_grids);
        history.epochs.push_back(stats);

        model.meta.epochs += 1;
        model.meta.final_train_rmse = stats.train_rmse;
        model.meta.final_val_rmse = stats.val_rmse;

        if (config.early_stop_rmse > 0.0 &&
            stats.train_rmse <= config.early_stop_rmse) {
            break;
        }
    }
    return history;
}

}  // namespace ergokit::nn
