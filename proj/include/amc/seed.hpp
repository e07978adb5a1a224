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

#ifndef AMC_SEED_HPP_
#define AMC_SEED_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace amc {

/** @brief SplitMix64 finalizer. Bijective on 64-bit words. */
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/** @brief Derive a child seed from a parent seed and a path of counters.
 *
 * The result depends only on its arguments, so any subset of children can be
 * regenerated in any order.
 */
constexpr std::uint64_t derive_seed(std::uint64_t base,
                                    std::initializer_list<std::uint64_t> path) noexcept
{
    std::uint64_t h = mix64(base);
    for (auto p : path)
        h = mix64(h ^ mix64(p + 0x632be59bd9b4e019ULL));
    return h;
}

/** @brief Random engine used for every seeded stream in the pipeline. */
using Rng = std::mt19937_64;

// Stream tags used with derive_seed so unrelated consumers never share a stream.
namespace seed_tag {
inline constexpr std::uint64_t kFrame = 0x4652;
inline constexpr std::uint64_t kChannel = 0x4348;
inline constexpr std::uint64_t kFading = 0x4641;
inline constexpr std::uint64_t kImpairments = 0x494d;
inline constexpr std::uint64_t kSplit = 0x5350;
inline constexpr std::uint64_t kShuffle = 0x5348;
inline constexpr std::uint64_t kInit = 0x494e;
inline constexpr std::uint64_t kDropout = 0x4450;
} // namespace seed_tag

} // namespace amc

#endif /* AMC_SEED_HPP_ */
