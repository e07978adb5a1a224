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

#ifndef AMC_BENCH_HPP_
#define AMC_BENCH_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "amc/stft.hpp"

namespace amc {

struct BenchTiming {
    std::size_t frames = 0;
    std::size_t frame_len_hi = 0;
    std::size_t frame_len_lo = 0;
    /** Seconds per run over all frames. */
    std::vector<double> runs_hi;
    std::vector<double> runs_lo;
    double median_hi = 0.0;
    double median_lo = 0.0;

    double speedup() const { return median_lo > 0.0 ? median_hi / median_lo : 0.0; }
};

double median(std::vector<double> v);

/** @brief Time the two presets on the same synthesized frames.
 *
 * The high-resolution preset sees frame_len_hi samples per frame, the
 * transformed preset the first frame_len_lo samples of the same frames.
 * One untimed warm-up pass precedes the timed runs, which alternate.
 */
BenchTiming bench_presets(const SpectrogramConfig& hi, const SpectrogramConfig& lo,
                          std::size_t frames, std::size_t runs, std::uint64_t seed,
                          std::size_t frame_len_hi = 8192, std::size_t frame_len_lo = 1024);

} // namespace amc

#endif /* AMC_BENCH_HPP_ */
