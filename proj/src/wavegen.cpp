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

#include "amc/wavegen.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <random>

#include "amc/error.hpp"
#include "amc/seed.hpp"

namespace amc {

namespace {

constexpr double kPi = std::numbers::pi;

// Waveform constants for the non-linear schemes.
constexpr double kFskModIndex = 0.5;
constexpr double kGfskBt = 0.35;
constexpr std::size_t kGaussianSpanSymbols = 4;
constexpr double kWbfmDeviationHz = 75'000.0;
constexpr double kAmDsbModIndex = 0.5;

// Analog program source.
constexpr int kSourceTones = 8;
constexpr double kSourceMinHz = 200.0;
constexpr double kSourceMaxHz = 10'000.0;

constexpr unsigned gray(unsigned k) { return k ^ (k >> 1); }

/** @brief Gray-coded PAM levels {-(M-1), ..., M-1}, indexed by bit pattern. */
std::vector<double> gray_pam_levels(unsigned m)
{
    std::vector<double> levels(m);
    for (unsigned k = 0; k < m; ++k)
        levels[gray(k)] = 2.0 * k - (m - 1.0);
    return levels;
}

std::vector<Sample> square_qam(unsigned bits_per_axis)
{
    const unsigned m = 1u << bits_per_axis;
    const auto levels = gray_pam_levels(m);
    std::vector<Sample> points(static_cast<std::size_t>(m) * m);
    for (unsigned vi = 0; vi < m; ++vi)
        for (unsigned vq = 0; vq < m; ++vq)
            points[(vi << bits_per_axis) | vq] = {levels[vi], levels[vq]};
    return points;
}

void normalize_power(std::vector<Sample>& points)
{
    const double p = mean_power(points);
    const double g = 1.0 / std::sqrt(p);
    for (auto& s : points)
        s *= g;
}

std::vector<std::uint8_t> random_bits(Rng& rng, std::size_t n)
{
    std::vector<std::uint8_t> bits(n);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 64 == 0)
            word = rng();
        bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
    }
    return bits;
}

struct Tone {
    double freq_hz;
    double amplitude;
    double phase;
};

std::vector<Tone> source_tones(std::uint64_t seed)
{
    Rng rng(seed);
    std::uniform_real_distribution<double> freq(kSourceMinHz, kSourceMaxHz);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
    std::vector<Tone> tones(kSourceTones);
    for (auto& t : tones) {
        t.freq_hz = freq(rng);
        t.amplitude = kSourceMinHz / t.freq_hz;
        t.phase = phase(rng);
    }
    return tones;
}

/** @brief Real source and its Hilbert transform, sharing one scale factor. */
struct AnalogSource {
    std::vector<double> real;
    std::vector<double> quadrature;
};

AnalogSource analog_source(std::size_t n, std::uint64_t seed, double fs)
{
    const auto tones = source_tones(seed);
    AnalogSource src{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    for (const auto& t : tones) {
        const double w = 2.0 * kPi * t.freq_hz / fs;
        for (std::size_t i = 0; i < n; ++i) {
            const double arg = w * static_cast<double>(i) + t.phase;
            src.real[i] += t.amplitude * std::cos(arg);
            src.quadrature[i] += t.amplitude * std::sin(arg);
        }
    }

    // The Hilbert transform of a constant is zero, so only the in-phase part
    // loses its mean.
    double mean = 0.0;
    for (double v : src.real)
        mean += v;
    mean /= static_cast<double>(n);
    double peak = 0.0;
    for (auto& v : src.real) {
        v -= mean;
        peak = std::max(peak, std::abs(v));
    }
    if (peak > 0.0) {
        for (auto& v : src.real)
            v /= peak;
        for (auto& v : src.quadrature)
            v /= peak;
    }
    return src;
}

std::vector<double> gaussian_taps(std::size_t sps)
{
    const double sigma = std::sqrt(std::log(2.0)) / (2.0 * kPi * kGfskBt);
    const std::size_t len = kGaussianSpanSymbols * sps + 1;
    const double centre = static_cast<double>(len - 1) / 2.0;
    std::vector<double> g(len);
    double sum = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        const double t = (static_cast<double>(i) - centre) / static_cast<double>(sps);
        g[i] = std::exp(-t * t / (2.0 * sigma * sigma));
        sum += g[i];
    }
    for (auto& v : g)
        v /= sum;
    return g;
}

/** @brief Continuous-phase binary FSK; Gaussian pre-filtered when gaussian is set. */
std::vector<Sample> fsk_waveform(std::span<const std::uint8_t> bits, std::size_t sps,
                                 bool gaussian)
{
    const std::size_t n = bits.size() * sps;
    std::vector<double> freq(n);
    for (std::size_t i = 0; i < n; ++i)
        freq[i] = bits[i / sps] ? 1.0 : -1.0;

    if (gaussian) {
        const auto g = gaussian_taps(sps);
        const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(g.size() / 2);
        std::vector<double> filtered(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < g.size(); ++j) {
                // Hold the end values beyond the edges.
                auto idx = static_cast<std::ptrdiff_t>(i) + half - static_cast<std::ptrdiff_t>(j);
                idx = std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(n) - 1);
                acc += g[j] * freq[static_cast<std::size_t>(idx)];
            }
            filtered[i] = acc;
        }
        freq = std::move(filtered);
    }

    std::vector<Sample> out(n);
    const double step = kPi * kFskModIndex / static_cast<double>(sps);
    double phase = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::polar(1.0, phase);
        phase = std::remainder(phase + step * freq[i], 2.0 * kPi);
    }
    return out;
}

} // namespace

ModulationKind kind(Modulation m) noexcept
{
    switch (m) {
    case Modulation::WBFM:
    case Modulation::AMSSB:
    case Modulation::AMDSB:
        return ModulationKind::Analog;
    default:
        return ModulationKind::Digital;
    }
}

std::string_view name(Modulation m) noexcept
{
    switch (m) {
    case Modulation::BPSK: return "BPSK";
    case Modulation::QPSK: return "QPSK";
    case Modulation::PSK8: return "8PSK";
    case Modulation::QAM16: return "QAM16";
    case Modulation::QAM64: return "QAM64";
    case Modulation::GFSK: return "GFSK";
    case Modulation::CPFSK: return "CPFSK";
    case Modulation::PAM4: return "PAM4";
    case Modulation::WBFM: return "WBFM";
    case Modulation::AMSSB: return "AM-SSB";
    case Modulation::AMDSB: return "AM-DSB";
    }
    return "?";
}

Modulation parse_modulation(std::string_view s)
{
    auto canon = [](std::string_view v) {
        std::string out;
        for (char c : v)
            if (std::isalnum(static_cast<unsigned char>(c)))
                out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        return out;
    };
    const std::string key = canon(s);
    for (auto m : kAllModulations)
        if (canon(name(m)) == key)
            return m;
    if (key == "PSK8")
        return Modulation::PSK8;
    throw UnsupportedSchemeError("unknown modulation '" + std::string(s) + "'");
}

bool is_linear(Modulation m) noexcept
{
    switch (m) {
    case Modulation::BPSK:
    case Modulation::QPSK:
    case Modulation::PSK8:
    case Modulation::QAM16:
    case Modulation::QAM64:
    case Modulation::PAM4:
        return true;
    default:
        return false;
    }
}

unsigned bits_per_symbol(Modulation m) noexcept
{
    switch (m) {
    case Modulation::BPSK: return 1;
    case Modulation::QPSK: return 2;
    case Modulation::PSK8: return 3;
    case Modulation::QAM16: return 4;
    case Modulation::QAM64: return 6;
    case Modulation::PAM4: return 2;
    case Modulation::GFSK:
    case Modulation::CPFSK: return 1;
    default: return 0;
    }
}

void FrameSpec::validate() const
{
    if (samples_per_symbol < 2)
        throw ParameterError("samples_per_symbol must be >= 2");
    if (frame_length == 0 || frame_length % samples_per_symbol != 0)
        throw ParameterError("frame_length must be a positive multiple of samples_per_symbol");
    if (!(sample_rate_hz > 0.0))
        throw ParameterError("sample_rate_hz must be positive");
    if (!(rrc_rolloff > 0.0 && rrc_rolloff <= 1.0))
        throw ParameterError("rrc_rolloff must lie in (0, 1]");
    if (rrc_span_symbols == 0 || rrc_span_symbols % 2 != 0)
        throw ParameterError("rrc_span_symbols must be a positive even count");
}

double mean_power(std::span<const Sample> x) noexcept
{
    if (x.empty())
        return 0.0;
    double acc = 0.0;
    for (const auto& s : x)
        acc += std::norm(s);
    return acc / static_cast<double>(x.size());
}

std::vector<Sample> constellation(Modulation m)
{
    std::vector<Sample> points;
    switch (m) {
    case Modulation::BPSK:
        points = {{1.0, 0.0}, {-1.0, 0.0}};
        break;
    case Modulation::QPSK:
        for (unsigned v = 0; v < 4; ++v)
            points.emplace_back(1.0 - 2.0 * ((v >> 1) & 1u), 1.0 - 2.0 * (v & 1u));
        break;
    case Modulation::PSK8:
        points.resize(8);
        for (unsigned k = 0; k < 8; ++k)
            points[gray(k)] = std::polar(1.0, 2.0 * kPi * k / 8.0);
        break;
    case Modulation::QAM16:
        points = square_qam(2);
        break;
    case Modulation::QAM64:
        points = square_qam(3);
        break;
    case Modulation::PAM4:
        for (double level : gray_pam_levels(4))
            points.emplace_back(level, 0.0);
        break;
    default:
        throw UnsupportedSchemeError(std::string(name(m)) + " has no linear constellation");
    }
    normalize_power(points);
    return points;
}

std::vector<Sample> map_symbols(std::span<const std::uint8_t> bits, Modulation m)
{
    if (!is_linear(m))
        throw UnsupportedSchemeError(std::string(name(m)) + " is not a linearly mapped scheme");
    const unsigned bps = bits_per_symbol(m);
    if (bits.size() % bps != 0)
        throw LengthError("bit count " + std::to_string(bits.size()) +
                          " is not a multiple of " + std::to_string(bps));
    const auto points = constellation(m);
    std::vector<Sample> out(bits.size() / bps);
    for (std::size_t k = 0; k < out.size(); ++k) {
        unsigned v = 0;
        for (unsigned b = 0; b < bps; ++b)
            v = (v << 1) | (bits[k * bps + b] & 1u);
        out[k] = points[v];
    }
    return out;
}

std::vector<double> rrc_taps(std::size_t sps, double rolloff, std::size_t span)
{
    const std::size_t len = span * sps + 1;
    const double centre = static_cast<double>(span * sps) / 2.0;
    const double b = rolloff;
    std::vector<double> h(len);
    for (std::size_t i = 0; i < len; ++i) {
        const double t = (static_cast<double>(i) - centre) / static_cast<double>(sps);
        if (t == 0.0) {
            h[i] = 1.0 - b + 4.0 * b / kPi;
        } else if (std::abs(std::abs(4.0 * b * t) - 1.0) < 1e-12) {
            h[i] = b / std::sqrt(2.0) *
                   ((1.0 + 2.0 / kPi) * std::sin(kPi / (4.0 * b)) +
                    (1.0 - 2.0 / kPi) * std::cos(kPi / (4.0 * b)));
        } else {
            h[i] = (std::sin(kPi * t * (1.0 - b)) + 4.0 * b * t * std::cos(kPi * t * (1.0 + b))) /
                   (kPi * t * (1.0 - (4.0 * b * t) * (4.0 * b * t)));
        }
    }
    double energy = 0.0;
    for (double v : h)
        energy += v * v;
    const double g = std::sqrt(static_cast<double>(sps) / energy);
    for (auto& v : h)
        v *= g;
    return h;
}

std::vector<Sample> pulse_shape(std::span<const Sample> symbols, const FrameSpec& spec)
{
    if (symbols.empty())
        throw EmptyInputError("pulse_shape: no symbols");
    if (spec.samples_per_symbol < 2)
        throw ParameterError("pulse_shape: samples_per_symbol must be >= 2");
    const std::size_t sps = spec.samples_per_symbol;
    const auto h = rrc_taps(sps, spec.rrc_rolloff, spec.rrc_span_symbols);
    const std::ptrdiff_t delay = static_cast<std::ptrdiff_t>(h.size() / 2);
    const std::ptrdiff_t taps = static_cast<std::ptrdiff_t>(h.size());

    std::vector<Sample> out(symbols.size() * sps, Sample{0.0, 0.0});
    for (std::size_t k = 0; k < symbols.size(); ++k) {
        const std::ptrdiff_t origin = static_cast<std::ptrdiff_t>(k * sps) - delay;
        for (std::ptrdiff_t j = 0; j < taps; ++j) {
            const std::ptrdiff_t n = origin + j;
            if (n < 0 || n >= static_cast<std::ptrdiff_t>(out.size()))
                continue;
            out[static_cast<std::size_t>(n)] += symbols[k] * h[static_cast<std::size_t>(j)];
        }
    }
    return out;
}

std::vector<double> synth_analog_source(std::size_t duration_samples, std::uint64_t seed,
                                        double sample_rate_hz)
{
    if (duration_samples == 0)
        throw ParameterError("synth_analog_source: duration must be >= 1 sample");
    return analog_source(duration_samples, seed, sample_rate_hz).real;
}

std::uint64_t frame_seed(std::uint64_t master_seed, Modulation m, std::uint64_t frame_index)
{
    return derive_seed(master_seed, {seed_tag::kFrame, class_index(m), frame_index});
}

IQFrame synthesize_frame_from_seed(Modulation m, const FrameSpec& spec, std::uint64_t seed)
{
    spec.validate();
    const std::size_t sps = spec.samples_per_symbol;
    const std::size_t n = spec.frame_length;
    // Guard symbols on both sides keep filter transients out of the frame.
    const std::size_t guard = spec.rrc_span_symbols / 2;
    const std::size_t nsym = spec.symbols_per_frame() + 2 * guard;

    Rng rng(seed);
    std::vector<Sample> samples;

    if (is_linear(m)) {
        const auto bits = random_bits(rng, nsym * bits_per_symbol(m));
        const auto shaped = pulse_shape(map_symbols(bits, m), spec);
        samples.assign(shaped.begin() + static_cast<std::ptrdiff_t>(guard * sps),
                       shaped.begin() + static_cast<std::ptrdiff_t>(guard * sps + n));
    } else if (m == Modulation::GFSK || m == Modulation::CPFSK) {
        const auto bits = random_bits(rng, nsym);
        const auto wave = fsk_waveform(bits, sps, m == Modulation::GFSK);
        samples.assign(wave.begin() + static_cast<std::ptrdiff_t>(guard * sps),
                       wave.begin() + static_cast<std::ptrdiff_t>(guard * sps + n));
    } else {
        const auto src = analog_source(n, rng(), spec.sample_rate_hz);
        samples.resize(n);
        switch (m) {
        case Modulation::WBFM: {
            const double step = 2.0 * kPi * kWbfmDeviationHz / spec.sample_rate_hz;
            double phase = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                phase = std::remainder(phase + step * src.real[i], 2.0 * kPi);
                samples[i] = std::polar(1.0, phase);
            }
            break;
        }
        case Modulation::AMDSB:
            for (std::size_t i = 0; i < n; ++i)
                samples[i] = {1.0 + kAmDsbModIndex * src.real[i], 0.0};
            break;
        case Modulation::AMSSB:
            // Analytic signal: upper sideband only.
            for (std::size_t i = 0; i < n; ++i)
                samples[i] = {src.real[i], src.quadrature[i]};
            break;
        default:
            throw UnsupportedSchemeError(std::string(name(m)));
        }
    }

    const double p = mean_power(samples);
    if (p > 0.0) {
        const double g = 1.0 / std::sqrt(p);
        for (auto& s : samples)
            s *= g;
    }

    IQFrame frame;
    frame.samples = std::move(samples);
    frame.scheme = m;
    frame.snr_db = std::nullopt;
    frame.frame_seed = seed;
    frame.sample_rate_hz = spec.sample_rate_hz;
    return frame;
}

IQFrame synthesize_clean_frame(Modulation m, const FrameSpec& spec, std::uint64_t frame_index)
{
    return synthesize_frame_from_seed(m, spec, frame_seed(spec.master_seed, m, frame_index));
}

} // namespace amc
