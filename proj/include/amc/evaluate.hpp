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

#ifndef AMC_EVALUATE_HPP_
#define AMC_EVALUATE_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "amc/dnn.hpp"
#include "amc/image.hpp"
#include "amc/tensor.hpp"

namespace amc {

/** @brief K x K counts; rows are true classes, columns predictions. */
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(std::vector<std::string> class_names);

    void add(std::size_t truth, std::size_t predicted, std::size_t n = 1);

    std::size_t count(std::size_t truth, std::size_t predicted) const
    {
        return counts_[truth * k_ + predicted];
    }
    std::size_t num_classes() const { return k_; }
    const std::vector<std::string>& class_names() const { return names_; }

    std::size_t total() const;
    std::size_t trace() const;
    std::size_t row_total(std::size_t truth) const;
    /** trace / total; 0 for an empty matrix. */
    double accuracy() const;
    /** Recall of one class; 0 when it has no samples. */
    double class_accuracy(std::size_t truth) const;

    /** @brief Relabel classes: old class i becomes new class perm[i]. */
    ConfusionMatrix permuted(const std::vector<std::size_t>& perm) const;

    bool operator==(const ConfusionMatrix&) const = default;

private:
    std::size_t k_;
    std::vector<std::string> names_;
    std::vector<std::size_t> counts_;
};

struct SnrTally {
    std::size_t correct = 0;
    std::size_t total = 0;
    double accuracy() const { return total ? static_cast<double>(correct) / total : 0.0; }
};

struct EvalReport {
    ConfusionMatrix confusion;
    std::map<int, SnrTally> per_snr;
};

/** @brief Argmax predictions over the set, accumulated per class and per SNR tag. */
EvalReport evaluate(const Network& net, const ImageSet& test, std::size_t batch_size = 64);

/** @brief Accumulate already-made predictions (one per item of the set). */
EvalReport tally(const ImageSet& set, const std::vector<std::size_t>& predictions);

/** @brief Header row ("true\\pred", names...) plus one row per true class. */
void write_confusion_csv(const std::filesystem::path& path, const ConfusionMatrix& cm);

/** @brief Row-normalized heatmap, cell_px square cells, colormapped. */
Image confusion_heatmap(const ConfusionMatrix& cm, std::size_t cell_px = 24);

/** @brief Plain-text report: overall, per-class and per-SNR accuracy tables,
 * followed by the confusion pairs worth watching. */
std::string format_report(const EvalReport& report);

} // namespace amc

#endif /* AMC_EVALUATE_HPP_ */
