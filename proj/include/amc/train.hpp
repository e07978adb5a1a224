// Copyright 2026 The amcspec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AMC_TRAIN_HPP_
#define AMC_TRAIN_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "amc/dnn.hpp"
#include "amc/tensor.hpp"

namespace amc {

struct TrainConfig {
    std::size_t max_epochs = 30;
    std::size_t batch_size = 64;
    double initial_lr = 1e-4;
    double lr_drop_factor = 0.1;
    std::size_t lr_drop_period_epochs = 5;
    double l2 = 1e-4;
    std::size_t validation_frequency_iters = 30;
    /** Consecutive validation checks without improvement before stopping. */
    std::size_t early_stop_patience = 5;
    std::uint64_t seed = 0;

    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;

    void validate() const;

    bool operator==(const TrainConfig&) const = default;
};

/** @brief Piecewise schedule: initial_lr * factor^floor((epoch - 1) / period), epoch >= 1. */
double learning_rate(const TrainConfig& cfg, std::size_t epoch);

/** @brief Patience counter over validation losses. */
class EarlyStopping {
public:
    explicit EarlyStopping(std::size_t patience) : patience_(patience) {}

    /** @brief Record a check; returns true when it is a new best (strictly lower). */
    bool update(double val_loss);

    bool should_stop() const { return patience_ > 0 && stale_ >= patience_; }
    std::size_t checks() const { return checks_; }
    double best() const { return best_; }

private:
    std::size_t patience_;
    std::size_t checks_ = 0;
    std::size_t stale_ = 0;
    double best_ = 0.0;
};

struct HistoryRow {
    std::size_t iteration = 0;
    std::size_t epoch = 0;
    double lr = 0.0;
    double train_loss = 0.0;
    std::optional<double> val_loss;
    std::optional<double> val_accuracy;
};

struct TrainResult {
    Network net;
    std::vector<HistoryRow> history;
    std::size_t iterations = 0;
    std::size_t best_iteration = 0;
    double best_val_loss = 0.0;
    std::string stop_reason;
};

/** @brief Adam with the piecewise schedule, periodic validation and early stopping.
 *
 * Returns the parameters from the best validation check. Mini-batch order is
 * a pure function of cfg.seed, so identical inputs give identical histories.
 * Throws TrainingError if the loss becomes non-finite.
 */
TrainResult train(const NetSpec& spec, const TrainConfig& cfg, const ImageSet& train_set,
                  const ImageSet& val_set,
                  const std::function<void(const HistoryRow&)>& progress = {});

/** @brief Mean cross-entropy and accuracy over a whole set (no regularization term). */
std::pair<double, double> loss_and_accuracy(const Network& net, const ImageSet& set,
                                            std::size_t batch_size = 64);

void write_history_csv(const std::filesystem::path& path, const std::vector<HistoryRow>& rows);

} // namespace amc

#endif /* AMC_TRAIN_HPP_ */
