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

#ifndef AMC_TENSOR_HPP_
#define AMC_TENSOR_HPP_

#include <cstddef>
#include <string>
#include <vector>

namespace amc {

/** @brief Height x width x channels. Data is stored HWC, channel fastest. */
struct Shape {
    std::size_t height = 0;
    std::size_t width = 0;
    std::size_t channels = 0;

    std::size_t size() const { return height * width * channels; }
    bool operator==(const Shape&) const = default;
};

std::string to_string(const Shape& s);

struct LabeledImage {
    std::vector<double> pixels;  // values in [0,1], HWC
    std::size_t label = 0;
    int snr_db = 0;
};

/** @brief A labeled image collection with a compact label space 0..K-1. */
struct ImageSet {
    Shape shape;
    std::vector<std::string> class_names;
    std::vector<LabeledImage> items;

    std::size_t size() const { return items.size(); }
    bool empty() const { return items.empty(); }
    std::size_t num_classes() const { return class_names.size(); }
};

} // namespace amc

#endif /* AMC_TENSOR_HPP_ */
