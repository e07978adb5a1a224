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

#ifndef AMC_WAVEGEN_HPP_
#define AMC_WAVEGEN_HPP_

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace amc {

using Sample = std::complex<double>;

/** @brief The eleven modulation schemes. Enumerator values are class indices. */
enum class Modulation : std::uint8_t {
    BPSK = 0,
    QPSK,
    PSK8,
    QAM16,
    QAM64,
    GFSK,
    CPFSK,
    PAM4,
    WBFM,
    AMSSB,
    AMDSB,
};

enum class ModulationKind { Digital, Analog };

inline constexpr std::size_t kNumModulations = 11;

inline constexpr std::array<Modulation, kNumModulations> kAllModulations = {
    Modulation::BPSK,  Modulation::QPSK,  Modulation::PSK8, Modulation::QAM16,
    Modulation::QAM64, Modulation::GFSK,  Modulation::CPFSK, Modulation::PAM4,
    Modulation::WBFM,  Modulation::AMSSB, Modulation::AMDSB,
};

constexpr std::size_t class_index(Modulation m) noexcept
{
    return static_cast<std::size_t>(m);
}

ModulationKind kind(Modulation m) noexcept;

/** @brief Display name, e.g. "8PSK", "AM-SSB". Also used as a directory name. */
std::string_view name(Modulation m) noexcept;

/** @brief Parse a display name or enumerator spelling (case-insensitive). */
Modulation parse_modulation(std::string_view s);

/** @brief True for the schemes handled by map_symbols(). */
bool is_linear(Modulation m) noexcept;

/** @brief Bits carried per symbol; 1 for the binary FSK schemes, 0 for analog. */
unsigned bits_per_symbol(Modulation m) noexcept;

/** @brief Frame geometry and shaping parameters. */
struct FrameSpec {
    std::size_t frame_length = 1024;
    std::size_t samples_per_symbol = 8;
    double sample_rate_hz = 200'000.0;
    double rrc_rolloff = 0.35;
    std::size_t rrc_span_symbols = 8;
    std::uint64_t master_seed = 0;

    std::size_t symbols_per_frame() const { return frame_length / samples_per_symbol; }

    /** @brief Throws ParameterError when the spec is unusable. */
    void validate() const;

    bool operator==(const FrameSpec&) const = default;
};

/** @brief One complex baseband frame with its provenance. */
struct IQFrame {
    std::vector<Sample> samples;
    Modulation scheme = Modulation::BPSK;
    /** nullopt means the frame is clean (no noise added). */
    std::optional<double> snr_db;
    std::uint64_t frame_seed = 0;
    double sample_rate_hz = 200'000.0;

    std::size_t size() const { return samples.size(); }
};

double mean_power(std::span<const Sample> x) noexcept;

/** @brief Gray-coded constellation of a linear scheme, indexed by symbol value.
 *
 * Point i carries the bits of i, most significant bit first. Every alphabet
 * is scaled to unit average power.
 */
std::vector<Sample> constellation(Modulation m);

/** @brief Map a bit sequence (one bit per element, 0 or 1) onto symbols. */
std::vector<Sample> map_symbols(std::span<const std::uint8_t> bits, Modulation m);

/** @brief Root-raised-cosine taps, length span*sps + 1, scaled so that
 * sum(h^2) == sps (unit-power output for unit-power symbols). */
std::vector<double> rrc_taps(std::size_t samples_per_symbol, double rolloff,
                             std::size_t span_symbols);

/** @brief Upsample by samples_per_symbol and filter with the RRC.
 *
 * The filter delay is compensated, so output sample k*sps is centred on
 * symbol k. The result holds exactly symbols.size() * sps samples.
 */
std::vector<Sample> pulse_shape(std::span<const Sample> symbols, const FrameSpec& spec);

/** @brief Seeded program-material stand-in for the analog schemes. */
std::vector<double> synth_analog_source(std::size_t duration_samples, std::uint64_t seed,
                                        double sample_rate_hz = 200'000.0);

/** @brief frame_seed for (master_seed, scheme, frame_index). */
std::uint64_t frame_seed(std::uint64_t master_seed, Modulation m, std::uint64_t frame_index);

/** @brief Clean frame, normalized to unit mean power. Pure function of its inputs. */
IQFrame synthesize_clean_frame(Modulation m, const FrameSpec& spec, std::uint64_t frame_index);

/** @brief Same as synthesize_clean_frame() but keyed directly by a frame seed. */
IQFrame synthesize_frame_from_seed(Modulation m, const FrameSpec& spec, std::uint64_t seed);

} // namespace amc

#endif /* AMC_WAVEGEN_HPP_ */
