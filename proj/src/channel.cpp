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

#include "amc/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "amc/error.hpp"
#include "amc/seed.hpp"

namespace amc {

namespace {

constexpr double kPi = std::numbers::pi;

// Interpolator half-length (taps on each side) and its Kaiser shape.
constexpr int kSincHalfTaps = 16;
constexpr double kSincKaiserBeta = 8.0;

double sinc(double x)
{
    if (x == 0.0)
        return 1.0;
    return std::sin(kPi * x) / (kPi * x);
}

double kaiser_at(double offset, double half_width)
{
    const double r = offset / half_width;
    if (std::abs(r) >= 1.0)
        return 0.0;
    return std::cyl_bessel_i(0.0, kSincKaiserBeta * std::sqrt(1.0 - r * r)) /
           std::cyl_bessel_i(0.0, kSincKaiserBeta);
}

Sample complex_gaussian(Rng& rng)
{
    // Unit total variance, split between I and Q.
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    const double re = g(rng);
    const double im = g(rng);
    return {re, im};
}

} // namespace

void FadingSpec::validate(std::size_t frame_length) const
{
    if (delay_taps.empty())
        throw ParameterError("fading: at least one tap is required");
    if (delay_taps.size() != tap_powers.size())
        throw ParameterError("fading: delay_taps and tap_powers differ in length");
    if (!(k_factor >= 0.0))
        throw ParameterError("fading: k_factor must be >= 0");
    double sum = 0.0;
    for (std::size_t i = 0; i < tap_powers.size(); ++i) {
        if (!(tap_powers[i] >= 0.0) || !std::isfinite(tap_powers[i]))
            throw ParameterError("fading: tap powers must be finite and >= 0");
        if (delay_taps[i] >= frame_length)
            throw ParameterError("fading: delay " + std::to_string(delay_taps[i]) +
                                 " exceeds frame length");
        sum += tap_powers[i];
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ParameterError("fading: tap powers must sum to 1");
}

void ChannelConfig::validate(double sample_rate_hz, std::size_t frame_length) const
{
    if (!(std::abs(cfo_hz) < sample_rate_hz / 2.0))
        throw ParameterError("cfo_hz must lie strictly inside +/- sample_rate/2");
    if (!(std::abs(sro_ppm) <= kMaxSroPpm))
        throw ParameterError("sro_ppm must satisfy |sro_ppm| <= 500");
    if (!std::isfinite(phase_offset_rad))
        throw ParameterError("phase_offset_rad must be finite");
    if (snr_db && std::isnan(*snr_db))
        throw ParameterError("snr_db is NaN");
    if (fading)
        fading->validate(frame_length);
}

double noise_variance(double signal_power, double snr_db) noexcept
{
    return signal_power / std::pow(10.0, snr_db / 10.0);
}

IQFrame apply_awgn(const IQFrame& frame, double snr_db, std::uint64_t seed)
{
    IQFrame out = frame;
    if (std::isinf(snr_db) && snr_db > 0.0)
        return out;
    out.snr_db = snr_db;
    const double sigma = std::sqrt(noise_variance(mean_power(frame.samples), snr_db) / 2.0);
    Rng rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    for (auto& s : out.samples) {
        const double re = g(rng);
        const double im = g(rng);
        s += Sample{sigma * re, sigma * im};
    }
    return out;
}

IQFrame apply_cfo_phase(const IQFrame& frame, double cfo_hz, double phase_rad)
{
    if (!(std::abs(cfo_hz) < frame.sample_rate_hz / 2.0))
        throw ParameterError("cfo_hz out of range for sample rate");
    IQFrame out = frame;
    if (cfo_hz == 0.0 && phase_rad == 0.0)
        return out;
    const double w = 2.0 * kPi * cfo_hz / frame.sample_rate_hz;
    for (std::size_t n = 0; n < out.samples.size(); ++n) {
        // Reduce the argument so long frames keep full precision.
        const double arg = std::remainder(w * static_cast<double>(n) + phase_rad, 2.0 * kPi);
        out.samples[n] *= std::polar(1.0, arg);
    }
    return out;
}

IQFrame apply_sro(const IQFrame& frame, double sro_ppm)
{
    if (!(std::abs(sro_ppm) <= kMaxSroPpm))
        throw ParameterError("sro_ppm must satisfy |sro_ppm| <= 500");
    IQFrame out = frame;
    if (sro_ppm == 0.0)
        return out;

    const double ratio = 1.0 + sro_ppm * 1e-6;
    const auto& x = frame.samples;
    const auto len = static_cast<std::ptrdiff_t>(x.size());
    for (std::size_t n = 0; n < x.size(); ++n) {
        const double t = static_cast<double>(n) * ratio;
        const auto base = static_cast<std::ptrdiff_t>(std::floor(t));
        Sample acc{0.0, 0.0};
        for (std::ptrdiff_t k = base - kSincHalfTaps + 1; k <= base + kSincHalfTaps; ++k) {
            if (k < 0 || k >= len)
                continue;
            const double d = t - static_cast<double>(k);
            acc += x[static_cast<std::size_t>(k)] * (sinc(d) * kaiser_at(d, kSincHalfTaps));
        }
        out.samples[n] = acc;
    }
    return out;
}

IQFrame apply_fading(const IQFrame& frame, const FadingSpec& fading, std::uint64_t seed)
{
    fading.validate(frame.samples.size());

    Rng rng(seed);
    std::uniform_real_distribution<double> uphase(0.0, 2.0 * kPi);
    std::vector<Sample> taps(fading.tap_powers.size());
    for (std::size_t j = 0; j < taps.size(); ++j) {
        Sample g;
        if (j == 0) {
            const double los_phase = uphase(rng);
            const Sample diffuse = complex_gaussian(rng);
            if (std::isinf(fading.k_factor)) {
                g = std::polar(1.0, los_phase);
            } else {
                const double k = fading.k_factor;
                g = std::sqrt(k / (k + 1.0)) * std::polar(1.0, los_phase) +
                    std::sqrt(1.0 / (k + 1.0)) * diffuse;
            }
        } else {
            g = complex_gaussian(rng);
        }
        taps[j] = std::sqrt(fading.tap_powers[j]) * g;
    }

    IQFrame out = frame;
    const auto& x = frame.samples;
    for (std::size_t n = 0; n < x.size(); ++n) {
        Sample acc{0.0, 0.0};
        for (std::size_t j = 0; j < taps.size(); ++j)
            if (n >= fading.delay_taps[j])
                acc += taps[j] * x[n - fading.delay_taps[j]];
        out.samples[n] = acc;
    }

    const double p_in = mean_power(x);
    const double p_out = mean_power(out.samples);
    if (p_out > 0.0 && p_in > 0.0) {
        const double g = std::sqrt(p_in / p_out);
        for (auto& s : out.samples)
            s *= g;
    }
    return out;
}

IQFrame apply_channel(const IQFrame& frame, const ChannelConfig& cfg)
{
    cfg.validate(frame.sample_rate_hz, frame.samples.size());
    IQFrame out = frame;
    if (cfg.fading)
        out = apply_fading(out, *cfg.fading,
                           derive_seed(cfg.channel_seed, {seed_tag::kFading}));
    out = apply_sro(out, cfg.sro_ppm);
    out = apply_cfo_phase(out, cfg.cfo_hz, cfg.phase_offset_rad);
    if (cfg.snr_db)
        out = apply_awgn(out, *cfg.snr_db, cfg.channel_seed);
    return out;
}

ChannelConfig draw_channel(const ImpairmentRanges& ranges, std::optional<double> snr_db,
                           std::uint64_t seed)
{
    Rng rng(derive_seed(seed, {seed_tag::kImpairments}));
    ChannelConfig cfg;
    cfg.snr_db = snr_db;
    cfg.channel_seed = seed;
    if (ranges.cfo_max_hz > 0.0)
        cfg.cfo_hz = std::uniform_real_distribution<double>(-ranges.cfo_max_hz,
                                                            ranges.cfo_max_hz)(rng);
    if (ranges.random_phase)
        cfg.phase_offset_rad = std::uniform_real_distribution<double>(0.0, 2.0 * kPi)(rng);
    if (ranges.sro_max_ppm > 0.0)
        cfg.sro_ppm = std::uniform_real_distribution<double>(-ranges.sro_max_ppm,
                                                             ranges.sro_max_ppm)(rng);
    cfg.fading = ranges.fading;
    return cfg;
}

} // namespace amc
