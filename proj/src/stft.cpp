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

#include "amc/stft.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include "amc/error.hpp"
#include "db_scale.hpp"

namespace amc {

static_assert(std::endian::native == std::endian::little,
              "raw spectrogram I/O assumes a little-endian host");

namespace {

std::string lower(std::string_view s)
{
    std::string out(s);
    for (auto& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

} // namespace

std::string_view to_string(WindowKind k) noexcept
{
    switch (k) {
    case WindowKind::Kaiser: return "kaiser";
    case WindowKind::Hann: return "hann";
    case WindowKind::Rectangular: return "rectangular";
    }
    return "?";
}

WindowKind parse_window_kind(std::string_view s)
{
    const auto v = lower(s);
    if (v == "kaiser")
        return WindowKind::Kaiser;
    if (v == "hann" || v == "hanning")
        return WindowKind::Hann;
    if (v == "rectangular" || v == "rect" || v == "boxcar")
        return WindowKind::Rectangular;
    throw ParameterError("unknown window kind '" + std::string(s) + "'");
}

void SpectrogramConfig::validate() const
{
    if (!is_power_of_two(nfft))
        throw ParameterError("nfft must be a power of two");
    if (window_len == 0 || window_len > nfft)
        throw ParameterError("window length must satisfy 0 < W <= nfft");
    if (overlap >= window_len)
        throw OverlapError("overlap must be smaller than the window length");
    if (window == WindowKind::Kaiser && !(kaiser_beta >= 0.0))
        throw ParameterError("kaiser beta must be >= 0");
    if (!std::isfinite(db_floor))
        throw ParameterError("db_floor must be finite");
}

SpectrogramConfig SpectrogramConfig::transformed()
{
    return SpectrogramConfig{WindowKind::Kaiser, 8.0, 8, 4, 32, -120.0, true};
}

SpectrogramConfig SpectrogramConfig::highres()
{
    return SpectrogramConfig{WindowKind::Kaiser, 8.0, 4096, 3584, 8192, -120.0, true};
}

std::size_t spectrogram_length(std::size_t signal_length, std::size_t window_len,
                               std::size_t overlap)
{
    if (overlap >= window_len)
        throw OverlapError("overlap " + std::to_string(overlap) +
                           " must be smaller than window " + std::to_string(window_len));
    if (signal_length < window_len)
        throw TooShortError("signal of " + std::to_string(signal_length) +
                            " samples is shorter than the window (" +
                            std::to_string(window_len) + ")");
    const std::size_t hop = window_len - overlap;
    const std::size_t surplus = signal_length - window_len;
    return 1 + (surplus + hop - 1) / hop;
}

double time_resolution(std::size_t window_len, double sample_rate_hz)
{
    return static_cast<double>(window_len) / sample_rate_hz;
}

double acquisition_time(std::size_t n_samples, double sample_rate_hz)
{
    return static_cast<double>(n_samples) / sample_rate_hz;
}

std::vector<double> make_window(WindowKind kind, std::size_t n, double kaiser_beta)
{
    std::vector<double> w(n, 1.0);
    if (n <= 1)
        return w;
    const double m = static_cast<double>(n - 1);
    switch (kind) {
    case WindowKind::Rectangular:
        break;
    case WindowKind::Hann:
        for (std::size_t i = 0; i < n; ++i)
            w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / m);
        break;
    case WindowKind::Kaiser: {
        const double denom = std::cyl_bessel_i(0.0, kaiser_beta);
        for (std::size_t i = 0; i < n; ++i) {
            const double r = 2.0 * static_cast<double>(i) / m - 1.0;
            w[i] = std::cyl_bessel_i(0.0, kaiser_beta * std::sqrt(std::max(0.0, 1.0 - r * r))) /
                   denom;
        }
        break;
    }
    }
    return w;
}

StftEngine::StftEngine(SpectrogramConfig cfg)
    : cfg_((cfg.validate(), cfg))
    , window_(make_window(cfg.window, cfg.window_len, cfg.kaiser_beta))
    , fft_(cfg.nfft)
{
}

void StftEngine::spectrum_into(std::span<const Sample> samples, std::size_t frame_index,
                               std::span<std::complex<double>> buf) const
{
    const std::size_t start = frame_index * cfg_.hop();
    const std::size_t avail = start < samples.size() ? samples.size() - start : 0;
    const std::size_t take = std::min(cfg_.window_len, avail);
    for (std::size_t i = 0; i < take; ++i)
        buf[i] = samples[start + i] * window_[i];
    std::fill(buf.begin() + static_cast<std::ptrdiff_t>(take), buf.end(),
              std::complex<double>{0.0, 0.0});
    fft_.forward(buf);
}

std::vector<std::complex<double>> StftEngine::frame_spectrum(std::span<const Sample> samples,
                                                             std::size_t frame_index) const
{
    std::vector<std::complex<double>> buf(cfg_.nfft);
    spectrum_into(samples, frame_index, buf);
    return buf;
}

Spectrogram StftEngine::compute(std::span<const Sample> samples, double sample_rate_hz) const
{
    Spectrogram out;
    out.n_frames = spectrogram_length(samples.size(), cfg_.window_len, cfg_.overlap);
    out.n_bins = cfg_.bins();
    out.delta_t = time_resolution(cfg_.window_len, sample_rate_hz);
    out.sample_rate_hz = sample_rate_hz;
    out.magnitudes_db.resize(out.n_frames * out.n_bins);

    const std::size_t nfft = cfg_.nfft;
    const std::size_t shift = cfg_.two_sided ? nfft / 2 : 0;
    const double floor_db = cfg_.db_floor;
    std::vector<std::complex<double>> buf(nfft);
    for (std::size_t t = 0; t < out.n_frames; ++t) {
        spectrum_into(samples, t, buf);
        detail::power_to_db(buf.data(), nfft, shift, out.n_bins, floor_db,
                            out.magnitudes_db.data() + t * out.n_bins);
    }
    return out;
}

Spectrogram StftEngine::compute(const IQFrame& frame) const
{
    if (frame.samples.size() < cfg_.window_len)
        throw TooShortError("frame of " + std::to_string(frame.samples.size()) +
                            " samples is shorter than the window (" +
                            std::to_string(cfg_.window_len) + ")");
    auto out = compute(frame.samples, frame.sample_rate_hz);
    out.scheme = frame.scheme;
    out.snr_db = frame.snr_db;
    out.frame_seed = frame.frame_seed;
    return out;
}

Spectrogram compute_spectrogram(const IQFrame& frame, const SpectrogramConfig& cfg)
{
    return StftEngine(cfg).compute(frame);
}

double bin_frequency(const SpectrogramConfig& cfg, std::size_t bin, double sample_rate_hz)
{
    const double df = sample_rate_hz / static_cast<double>(cfg.nfft);
    if (cfg.two_sided)
        return (static_cast<double>(bin) - static_cast<double>(cfg.nfft / 2)) * df;
    return static_cast<double>(bin) * df;
}

std::string_view to_string(CostModel m) noexcept
{
    return m == CostModel::Linear ? "linear" : "nlogn";
}

CostReport cost_report(std::size_t nfft_hi, std::size_t nfft_lo, CostModel model,
                       std::optional<std::size_t> frame_len_hi,
                       std::optional<std::size_t> frame_len_lo)
{
    if (!is_power_of_two(nfft_hi) || !is_power_of_two(nfft_lo))
        throw ParameterError("cost_report: NFFT values must be powers of two");
    if (nfft_hi < nfft_lo)
        throw ParameterError("cost_report: nfft_hi must be >= nfft_lo");

    auto cost = [model](std::size_t n) {
        const double d = static_cast<double>(n);
        return model == CostModel::Linear ? d : d * std::log2(d);
    };

    CostReport r;
    r.nfft_hi = nfft_hi;
    r.nfft_lo = nfft_lo;
    r.model = model;
    const double hi = cost(nfft_hi);
    r.reduction_pct = hi > 0.0 ? 100.0 * (1.0 - cost(nfft_lo) / hi) : 0.0;
    if (frame_len_hi && frame_len_lo && *frame_len_lo > 0) {
        // The sample rate cancels in the ratio of acquisition spans.
        r.span_ratio = acquisition_time(*frame_len_hi, 1.0) / acquisition_time(*frame_len_lo, 1.0);
    }
    return r;
}

std::string_view to_string(Palette p) noexcept
{
    return p == Palette::Grayscale ? "grayscale" : "colormapped";
}

Palette parse_palette(std::string_view s)
{
    const auto v = lower(s);
    if (v == "grayscale" || v == "gray" || v == "grey")
        return Palette::Grayscale;
    if (v == "colormapped" || v == "color" || v == "colour")
        return Palette::Colormapped;
    throw ParameterError("unknown palette '" + std::string(s) + "'");
}

std::vector<double> normalized_levels(const Spectrogram& spec)
{
    if (spec.n_frames == 0 || spec.n_bins == 0)
        throw ParameterError("render: empty spectrogram");
    const auto [lo_it, hi_it] =
        std::minmax_element(spec.magnitudes_db.begin(), spec.magnitudes_db.end());
    const double lo = *lo_it;
    const double range = *hi_it - lo;

    const std::size_t h = spec.n_bins;
    const std::size_t w = spec.n_frames;
    std::vector<double> levels(h * w);
    for (std::size_t r = 0; r < h; ++r) {
        const std::size_t bin = h - 1 - r;
        for (std::size_t c = 0; c < w; ++c) {
            const double v = spec.at(c, bin);
            levels[r * w + c] = range > 0.0 ? 255.0 * (v - lo) / range : 128.0;
        }
    }
    return levels;
}

Image render_image(const Spectrogram& spec, std::size_t out_height, std::size_t out_width,
                   Palette palette)
{
    if (out_height == 0 || out_width == 0)
        throw ParameterError("render: output size must be positive");
    const auto levels = normalized_levels(spec);
    const auto resized =
        resize_bilinear(levels, spec.n_bins, spec.n_frames, out_height, out_width);

    Image img;
    img.height = out_height;
    img.width = out_width;
    img.channels = palette == Palette::Grayscale ? 1 : 3;
    img.pixels.resize(out_height * out_width * img.channels);
    for (std::size_t i = 0; i < resized.size(); ++i) {
        const double v = std::clamp(resized[i], 0.0, 255.0);
        if (palette == Palette::Grayscale) {
            img.pixels[i] = static_cast<std::uint8_t>(std::lround(v));
        } else {
            colormap(v, &img.pixels[3 * i]);
        }
    }
    return img;
}

void write_raw_spectrogram(const std::filesystem::path& path, const Spectrogram& spec,
                           const SpectrogramConfig& cfg)
{
    std::vector<float> data(spec.magnitudes_db.begin(), spec.magnitudes_db.end());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot create " + path.string());
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size() * sizeof(float)));
    if (!out)
        throw IoError("write failed: " + path.string());

    auto side = path;
    side += ".txt";
    std::ofstream meta(side, std::ios::trunc);
    if (!meta)
        throw IoError("cannot create " + side.string());
    meta.precision(17);
    meta << "format=f32le\n"
         << "layout=row-major frames x bins\n"
         << "n_frames=" << spec.n_frames << "\n"
         << "n_bins=" << spec.n_bins << "\n"
         << "delta_t=" << spec.delta_t << "\n"
         << "sample_rate_hz=" << spec.sample_rate_hz << "\n"
         << "window=" << to_string(cfg.window) << "\n"
         << "kaiser_beta=" << cfg.kaiser_beta << "\n"
         << "window_len=" << cfg.window_len << "\n"
         << "overlap=" << cfg.overlap << "\n"
         << "nfft=" << cfg.nfft << "\n"
         << "db_floor=" << cfg.db_floor << "\n"
         << "two_sided=" << (cfg.two_sided ? "true" : "false") << "\n"
         << "scheme=" << name(spec.scheme) << "\n"
         << "snr_db=" << (spec.snr_db ? std::to_string(*spec.snr_db) : std::string("clean"))
         << "\n"
         << "frame_seed=" << spec.frame_seed << "\n";
    if (!meta)
        throw IoError("write failed: " + side.string());
}

Spectrogram read_raw_spectrogram(const std::filesystem::path& path)
{
    auto side = path;
    side += ".txt";
    std::ifstream meta(side);
    if (!meta)
        throw IoError("cannot open " + side.string());
    std::map<std::string, std::string> kv;
    for (std::string line; std::getline(meta, line);) {
        const auto eq = line.find('=');
        if (eq != std::string::npos)
            kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    auto need = [&](const std::string& k) -> const std::string& {
        auto it = kv.find(k);
        if (it == kv.end())
            throw FormatError(side.string() + ": missing key " + k);
        return it->second;
    };
    if (need("format") != "f32le")
        throw FormatError(side.string() + ": unsupported format");

    Spectrogram spec;
    try {
        spec.n_frames = std::stoul(need("n_frames"));
        spec.n_bins = std::stoul(need("n_bins"));
        spec.delta_t = std::stod(need("delta_t"));
        spec.sample_rate_hz = std::stod(need("sample_rate_hz"));
        spec.scheme = parse_modulation(need("scheme"));
        const auto& snr = need("snr_db");
        if (snr != "clean")
            spec.snr_db = std::stod(snr);
        spec.frame_seed = std::stoull(need("frame_seed"));
    } catch (const std::logic_error&) {
        throw FormatError(side.string() + ": malformed value");
    }

    const auto bytes = read_file(path);
    if (bytes.size() != spec.n_frames * spec.n_bins * sizeof(float))
        throw FormatError(path.string() + ": size does not match descriptor");
    std::vector<float> data(spec.n_frames * spec.n_bins);
    std::memcpy(data.data(), bytes.data(), bytes.size());
    spec.magnitudes_db.assign(data.begin(), data.end());
    return spec;
}

} // namespace amc
