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

#ifndef AMC_STFT_HPP_
#define AMC_STFT_HPP_

#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "amc/fft.hpp"
#include "amc/image.hpp"
#include "amc/wavegen.hpp"

namespace amc {

enum class WindowKind { Kaiser, Hann, Rectangular };

std::string_view to_string(WindowKind k) noexcept;
WindowKind parse_window_kind(std::string_view s);

struct SpectrogramConfig {
    WindowKind window = WindowKind::Kaiser;
    double kaiser_beta = 8.0;
    std::size_t window_len = 8;
    std::size_t overlap = 4;
    std::size_t nfft = 32;
    double db_floor = -120.0;
    /** DC-centered two-sided spectrum; one-sided keeps bins 0..nfft/2. */
    bool two_sided = true;

    std::size_t hop() const { return window_len - overlap; }
    std::size_t bins() const { return two_sided ? nfft : nfft / 2 + 1; }

    void validate() const;

    /** W=8, O=4, nfft=32, Kaiser(8). */
    static SpectrogramConfig transformed();
    /** W=4096, O=3584, nfft=8192, Kaiser(8). */
    static SpectrogramConfig highres();

    bool operator==(const SpectrogramConfig&) const = default;
};

/** @brief dB magnitude grid, row-major [n_frames x n_bins]. */
struct Spectrogram {
    std::size_t n_frames = 0;
    std::size_t n_bins = 0;
    std::vector<double> magnitudes_db;
    /** Seconds per time bin (window length over sample rate). */
    double delta_t = 0.0;
    double sample_rate_hz = 0.0;

    Modulation scheme = Modulation::BPSK;
    std::optional<double> snr_db;
    std::uint64_t frame_seed = 0;

    double at(std::size_t frame, std::size_t bin) const
    {
        return magnitudes_db[frame * n_bins + bin];
    }
    std::span<const double> row(std::size_t frame) const
    {
        return {magnitudes_db.data() + frame * n_bins, n_bins};
    }
};

/** @brief Number of STFT frames: 1 + ceil((SL - W) / (W - O)). */
std::size_t spectrogram_length(std::size_t signal_length, std::size_t window_len,
                               std::size_t overlap);

/** @brief Seconds per time bin, W / fs. */
double time_resolution(std::size_t window_len, double sample_rate_hz);

/** @brief Seconds spanned by n samples, n / fs. */
double acquisition_time(std::size_t n_samples, double sample_rate_hz);

/** @brief Symmetric analysis window of length n. */
std::vector<double> make_window(WindowKind kind, std::size_t n, double kaiser_beta = 8.0);

/** @brief Reusable STFT for one configuration.
 *
 * Holds the window and FFT plan. compute() is const and allocation-light, so
 * one engine can serve a whole batch or several threads.
 */
class StftEngine {
public:
    explicit StftEngine(SpectrogramConfig cfg);

    const SpectrogramConfig& config() const { return cfg_; }

    Spectrogram compute(std::span<const Sample> samples, double sample_rate_hz) const;
    Spectrogram compute(const IQFrame& frame) const;

    /** @brief Windowed, zero-padded FFT of one STFT frame in natural (unshifted) order. */
    std::vector<std::complex<double>> frame_spectrum(std::span<const Sample> samples,
                                                     std::size_t frame_index) const;

private:
    void spectrum_into(std::span<const Sample> samples, std::size_t frame_index,
                       std::span<std::complex<double>> buf) const;

    SpectrogramConfig cfg_;
    std::vector<double> window_;
    Fft fft_;
};

Spectrogram compute_spectrogram(const IQFrame& frame, const SpectrogramConfig& cfg);

/** @brief Frequency in Hz of output bin j under the config's bin layout. */
double bin_frequency(const SpectrogramConfig& cfg, std::size_t bin, double sample_rate_hz);

enum class CostModel { Linear, NLogN };

std::string_view to_string(CostModel m) noexcept;

struct CostReport {
    std::size_t nfft_hi = 0;
    std::size_t nfft_lo = 0;
    CostModel model = CostModel::Linear;
    double reduction_pct = 0.0;
    /** Ratio of acquisition spans; 0 when no frame lengths were given. */
    double span_ratio = 0.0;
    std::optional<double> wall_clock_hi;
    std::optional<double> wall_clock_lo;
};

/** @brief Cost reduction of an nfft_lo transform relative to nfft_hi.
 *
 * When frame lengths are supplied, span_ratio is the ratio of their
 * acquisition times (hi over lo).
 */
CostReport cost_report(std::size_t nfft_hi, std::size_t nfft_lo, CostModel model,
                       std::optional<std::size_t> frame_len_hi = std::nullopt,
                       std::optional<std::size_t> frame_len_lo = std::nullopt);

enum class Palette { Grayscale, Colormapped };

std::string_view to_string(Palette p) noexcept;
Palette parse_palette(std::string_view s);

/** @brief Min-max normalize to [0,255] without resizing.
 *
 * Rows are frequency bins with the highest frequency on top; columns are
 * time frames. A constant spectrogram renders as uniform 128.
 */
std::vector<double> normalized_levels(const Spectrogram& spec);

/** @brief Render a spectrogram to an 8-bit image of the requested size. */
Image render_image(const Spectrogram& spec, std::size_t out_height, std::size_t out_width,
                   Palette palette = Palette::Grayscale);

/** @brief Write float32 LE grid plus a key=value sidecar (path + ".txt"). */
void write_raw_spectrogram(const std::filesystem::path& path, const Spectrogram& spec,
                           const SpectrogramConfig& cfg);

/** @brief Read back the grid written by write_raw_spectrogram(). */
Spectrogram read_raw_spectrogram(const std::filesystem::path& path);

} // namespace amc

#endif /* AMC_STFT_HPP_ */
