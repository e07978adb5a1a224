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

#ifndef AMC_CHANNEL_HPP_
#define AMC_CHANNEL_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "amc/wavegen.hpp"

namespace amc {

/** @brief Static multipath profile; the first tap carries the line of sight. */
struct FadingSpec {
    /** Rician K factor (linear). Infinity means line of sight only on tap 0. */
    double k_factor = 4.0;
    std::vector<std::size_t> delay_taps{0, 2, 5};
    std::vector<double> tap_powers{0.8, 0.15, 0.05};

    void validate(std::size_t frame_length) const;

    bool operator==(const FadingSpec&) const = default;
};

struct ChannelConfig {
    /** nullopt (or +infinity) leaves the frame noiseless. */
    std::optional<double> snr_db;
    double cfo_hz = 0.0;
    double phase_offset_rad = 0.0;
    double sro_ppm = 0.0;
    std::optional<FadingSpec> fading;
    std::uint64_t channel_seed = 0;

    void validate(double sample_rate_hz, std::size_t frame_length) const;
};

/** @brief Ranges from which per-frame impairments are drawn for dataset builds. */
struct ImpairmentRanges {
    double cfo_max_hz = 500.0;
    double sro_max_ppm = 50.0;
    bool random_phase = true;
    std::optional<FadingSpec> fading = FadingSpec{};

    bool operator==(const ImpairmentRanges&) const = default;
};

inline constexpr double kMaxSroPpm = 500.0;

/** @brief Total complex noise variance for a given signal power and SNR. */
double noise_variance(double signal_power, double snr_db) noexcept;

IQFrame apply_awgn(const IQFrame& frame, double snr_db, std::uint64_t seed);

/** @brief Rotate sample n by exp(i(2*pi*cfo*n/fs + phase)). */
IQFrame apply_cfo_phase(const IQFrame& frame, double cfo_hz, double phase_rad);

/** @brief Resample by (1 + ppm*1e-6) with windowed-sinc interpolation; length is kept. */
IQFrame apply_sro(const IQFrame& frame, double sro_ppm);

/** @brief Seeded Rician tap realization, causal convolution, power renormalization. */
IQFrame apply_fading(const IQFrame& frame, const FadingSpec& fading, std::uint64_t seed);

/** @brief Fading, then SRO, then CFO/phase, then AWGN. */
IQFrame apply_channel(const IQFrame& frame, const ChannelConfig& cfg);

/** @brief Draw one channel realization from the ranges. Deterministic in seed. */
ChannelConfig draw_channel(const ImpairmentRanges& ranges, std::optional<double> snr_db,
                           std::uint64_t seed);

} // namespace amc

#endif /* AMC_CHANNEL_HPP_ */
