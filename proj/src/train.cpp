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

#include "amc/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "amc/error.hpp"
#include "amc/seed.hpp"

namespace amc {

void TrainConfig::validate() const
{
    if (max_epochs == 0)
        throw ParameterError("max_epochs must be >= 1");
    if (batch_size == 0)
        throw ParameterError("batch_size must be >= 1");
    if (!(initial_lr > 0.0) || !(lr_drop_factor > 0.0))
        throw ParameterError("learning rate and drop factor must be > 0");
    if (lr_drop_period_epochs == 0)
        throw ParameterError("lr_drop_period_epochs must be >= 1");
    if (!(l2 >= 0.0))
        throw ParameterError("l2 must be >= 0");
    if (validation_frequency_iters == 0)
        throw ParameterError("validation_frequency_iters must be >= 1");
    if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0) ||
        !(adam_epsilon > 0.0))
        throw ParameterError("invalid Adam constants");
}

double learning_rate(const TrainConfig& cfg, std::size_t epoch)
{
    if (epoch == 0)
        throw ParameterError("epochs are counted from 1");
    const auto drops = static_cast<double>((epoch - 1) / cfg.lr_drop_period_epochs);
    return cfg.initial_lr * std::pow(cfg.lr_drop_factor, drops);
}

bool EarlyStopping::update(double val_loss)
{
    ++checks_;
    if (checks_ == 1 || val_loss < best_) {
        best_ = val_loss;
        stale_ = 0;
        return true;
    }
    ++stale_;
    return false;
}

std::pair<double, double> loss_and_accuracy(const Network& net, const ImageSet& set,
                                            std::size_t batch_size)
{
    if (set.empty())
        return {0.0, 0.0};
    double loss = 0.0;
    std::size_t correct = 0;
    std::vector<std::size_t> idx;
    std::vector<std::size_t> labels;
    for (std::size_t start = 0; start < set.size(); start += batch_size) {
        const std::size_t end = std::min(set.size(), start + batch_size);
        idx.resize(end - start);
        std::iota(idx.begin(), idx.end(), start);
        labels.clear();
        for (auto i : idx)
            labels.push_back(set.items[i].label);
        const Matrix batch = make_batch(set, idx);
        loss += net.loss(batch, labels, 0.0) * static_cast<double>(idx.size());
        const Matrix probs = net.forward(batch);
        for (Eigen::Index b = 0; b < probs.cols(); ++b) {
            Eigen::Index arg = 0;
            probs.col(b).maxCoeff(&arg);
            if (static_cast<std::size_t>(arg) == labels[static_cast<std::size_t>(b)])
                ++correct;
        }
    }
    return {loss / static_cast<double>(set.size()),
            static_cast<double>(correct) / static_cast<double>(set.size())};
}

TrainResult train(const NetSpec& spec, const TrainConfig& cfg, const ImageSet& train_set,
                  const ImageSet& val_set, const std::function<void(const HistoryRow&)>& progress)
{
    cfg.validate();
    if (train_set.empty() || val_set.empty())
        throw ParameterError("training and validation sets must be non-empty");
    if (!(train_set.shape == spec.input) || !(val_set.shape == spec.input))
        throw ShapeError("image shape does not match network input " + to_string(spec.input));

    TrainResult result{Network(spec), {}, 0, 0, 0.0, "max_epochs"};
    Network& net = result.net;
    if (train_set.num_classes() != 0 && net.num_classes() != train_set.num_classes())
        throw ShapeError("network has " + std::to_string(net.num_classes()) +
                         " outputs but the data has " +
                         std::to_string(train_set.num_classes()) + " classes");

    auto params = net.parameters();
    std::vector<Matrix> m(params.size()), v(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        m[i] = Matrix::Zero(params[i]->value.rows(), params[i]->value.cols());
        v[i] = m[i];
    }

    EarlyStopping stopper(cfg.early_stop_patience);
    std::vector<Matrix> best = net.snapshot();
    std::vector<std::size_t> order(train_set.size());
    std::vector<std::size_t> labels;
    std::size_t iteration = 0;
    bool stop = false;

    auto validate_now = [&](HistoryRow& row) {
        const auto [loss, acc] = loss_and_accuracy(net, val_set, cfg.batch_size);
        row.val_loss = loss;
        row.val_accuracy = acc;
        if (stopper.update(loss)) {
            best = net.snapshot();
            result.best_iteration = iteration;
            result.best_val_loss = loss;
        }
        if (stopper.should_stop()) {
            stop = true;
            result.stop_reason = "early_stopping";
        }
    };

    for (std::size_t epoch = 1; epoch <= cfg.max_epochs && !stop; ++epoch) {
        const double lr = learning_rate(cfg, epoch);
        std::iota(order.begin(), order.end(), 0);
        Rng shuffle_rng(derive_seed(cfg.seed, {seed_tag::kShuffle, epoch}));
        std::shuffle(order.begin(), order.end(), shuffle_rng);

        for (std::size_t start = 0; start < order.size() && !stop; start += cfg.batch_size) {
            ++iteration;
            const std::size_t end = std::min(order.size(), start + cfg.batch_size);
            const std::span<const std::size_t> idx(order.data() + start, end - start);
            labels.clear();
            for (auto i : idx)
                labels.push_back(train_set.items[i].label);

            const Matrix batch = make_batch(train_set, idx);
            const Pass pass{true, derive_seed(cfg.seed, {seed_tag::kDropout, iteration})};
            const double loss = net.loss_and_grads(batch, labels, cfg.l2, pass);
            if (!std::isfinite(loss))
                throw TrainingError("loss became non-finite at iteration " +
                                    std::to_string(iteration));

            const double t = static_cast<double>(iteration);
            const double c1 = 1.0 - std::pow(cfg.adam_beta1, t);
            const double c2 = 1.0 - std::pow(cfg.adam_beta2, t);
            for (std::size_t p = 0; p < params.size(); ++p) {
                const Matrix& g = params[p]->grad;
                m[p] = cfg.adam_beta1 * m[p] + (1.0 - cfg.adam_beta1) * g;
                v[p] = cfg.adam_beta2 * v[p] + (1.0 - cfg.adam_beta2) * g.cwiseAbs2();
                params[p]->value.array() -=
                    lr * (m[p].array() / c1) / ((v[p].array() / c2).sqrt() + cfg.adam_epsilon);
            }

            HistoryRow row{iteration, epoch, lr, loss, std::nullopt, std::nullopt};
            const bool last =
                epoch == cfg.max_epochs && end == order.size();
            if (iteration % cfg.validation_frequency_iters == 0 || last)
                validate_now(row);
            result.history.push_back(row);
            if (progress)
                progress(row);
        }
    }

    result.iterations = iteration;
    net.restore(best);
    return result;
}

void write_history_csv(const std::filesystem::path& path, const std::vector<HistoryRow>& rows)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw IoError("cannot create " + path.string());
    out.precision(10);
    out << "iteration,epoch,lr,train_loss,val_loss,val_accuracy\n";
    for (const auto& r : rows) {
        out << r.iteration << ',' << r.epoch << ',' << r.lr << ',' << r.train_loss << ',';
        if (r.val_loss)
            out << *r.val_loss;
        out << ',';
        if (r.val_accuracy)
            out << *r.val_accuracy;
        out << '\n';
    }
    if (!out)
        throw IoError("write failed: " + path.string());
}

} // namespace amc
