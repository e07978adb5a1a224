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

#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>

#include "amc/error.hpp"
#include "amc/stft.hpp"
#include "amc/wavegen.hpp"
#include "support.hpp"

using namespace amc;
using amc::test::Gen;

namespace {

const std::vector<Modulation> kLinear = {Modulation::BPSK,  Modulation::QPSK,  Modulation::PSK8,
                                        Modulation::QAM16, Modulation::QAM64, Modulation::PAM4};

double mean_sq(const std::vector<Sample>& v)
{
    double s = 0.0;
    for (auto x : v)
        s += std::norm(x);
    return s / static_cast<double>(v.size());
}

double envelope_cv(const std::vector<Sample>& v)
{
    double m = 0.0, m2 = 0.0;
    for (auto x : v) {
        m += std::abs(x);
        m2 += std::norm(x);
    }
    m /= static_cast<double>(v.size());
    m2 /= static_cast<double>(v.size());
    return std::sqrt(std::max(0.0, m2 - m * m)) / m;
}

} // namespace

TEST_CASE("scheme catalogue")
{
    CHECK(kAllModulations.size() == 11);
    std::size_t digital = 0;
    for (std::size_t i = 0; i < kAllModulations.size(); ++i) {
        CHECK(class_index(kAllModulations[i]) == i);
        if (kind(kAllModulations[i]) == ModulationKind::Digital)
            ++digital;
        CHECK(parse_modulation(name(kAllModulations[i])) == kAllModulations[i]);
    }
    CHECK(digital == 8);
    CHECK(parse_modulation("qam16") == Modulation::QAM16);
    CHECK(parse_modulation("am-ssb") == Modulation::AMSSB);
    CHECK(parse_modulation("PSK8") == Modulation::PSK8);
    CHECK_THROWS_AS(parse_modulation("OFDM"), UnsupportedSchemeError);
}

TEST_CASE("BPSK maps bits 0,1 to +1,-1")
{
    const std::vector<std::uint8_t> bits{0, 1};
    const auto s = map_symbols(bits, Modulation::BPSK);
    REQUIRE(s.size() == 2);
    CHECK(s[0] == Sample{1.0, 0.0});
    CHECK(s[1] == Sample{-1.0, 0.0});
}

TEST_CASE("QAM16 alphabet is the scaled {+-1,+-3} grid with unit power")
{
    const auto pts = constellation(Modulation::QAM16);
    REQUIRE(pts.size() == 16);
    std::set<std::pair<long, long>> expected, got;
    for (int i : {-3, -1, 1, 3})
        for (int q : {-3, -1, 1, 3})
            expected.insert({i, q});
    for (auto p : pts)
        got.insert({std::lround(p.real() * std::sqrt(10.0)), std::lround(p.imag() * std::sqrt(10.0))});
    CHECK(got == expected);
    CHECK(mean_sq(pts) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("PAM4 levels are {-3,-1,1,3}/sqrt(5)")
{
    const auto pts = constellation(Modulation::PAM4);
    REQUIRE(pts.size() == 4);
    std::vector<double> levels;
    for (auto p : pts) {
        CHECK(p.imag() == 0.0);
        levels.push_back(p.real() * std::sqrt(5.0));
    }
    std::sort(levels.begin(), levels.end());
    const double want[] = {-3.0, -1.0, 1.0, 3.0};
    for (int i = 0; i < 4; ++i)
        CHECK(levels[i] == doctest::Approx(want[i]).epsilon(1e-12));
    CHECK(mean_sq(pts) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("alphabets are distinct, unit power and Gray coded")
{
    const std::map<Modulation, std::size_t> sizes{{Modulation::BPSK, 2},  {Modulation::QPSK, 4},
                                                  {Modulation::PSK8, 8},  {Modulation::QAM16, 16},
                                                  {Modulation::QAM64, 64}, {Modulation::PAM4, 4}};
    for (auto m : kLinear) {
        CAPTURE(name(m));
        const auto pts = constellation(m);
        CHECK(pts.size() == sizes.at(m));
        CHECK(pts.size() == (std::size_t{1} << bits_per_symbol(m)));
        CHECK(mean_sq(pts) == doctest::Approx(1.0).epsilon(1e-12));

        double dmin = 1e9;
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j)
                dmin = std::min(dmin, std::abs(pts[i] - pts[j]));
        CHECK(dmin > 1e-6);
        // Nearest neighbours differ in exactly one bit.
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j)
                if (std::abs(pts[i] - pts[j]) < dmin * (1.0 + 1e-9))
                    CHECK(std::popcount(static_cast<unsigned>(i ^ j)) == 1);
    }
}

TEST_CASE("map_symbols rejects non-linear schemes and ragged bit counts")
{
    const std::vector<std::uint8_t> bits{0, 1, 1};
    CHECK_THROWS_AS(map_symbols(bits, Modulation::GFSK), UnsupportedSchemeError);
    CHECK_THROWS_AS(map_symbols(bits, Modulation::WBFM), UnsupportedSchemeError);
    CHECK_THROWS_AS(map_symbols(bits, Modulation::QPSK), LengthError);
    CHECK_NOTHROW(map_symbols(bits, Modulation::PSK8));
}

TEST_CASE("map_symbols property: symbol k equals the point indexed by its bits")
{
    Gen g(11);
    for (int c = 0; c < amc::test::kPropertyCases; ++c) {
        const Modulation m = g.pick(kLinear);
        const unsigned bps = bits_per_symbol(m);
        const std::size_t n = g.index(1, 40);
        std::vector<std::uint8_t> bits(n * bps);
        for (auto& b : bits)
            b = g.coin();
        const auto syms = map_symbols(bits, m);
        const auto pts = constellation(m);
        REQUIRE(syms.size() == n);
        for (std::size_t k = 0; k < n; ++k) {
            unsigned v = 0;
            for (unsigned b = 0; b < bps; ++b)
                v = v * 2 + bits[k * bps + b];
            CHECK(syms[k] == pts[v]);
        }
    }
}

TEST_CASE("RRC taps: length, symmetry, energy")
{
    for (std::size_t sps : {2u, 4u, 8u}) {
        for (double beta : {0.2, 0.35, 0.5, 1.0}) {
            const auto h = rrc_taps(sps, beta, 8);
            REQUIRE(h.size() == 8 * sps + 1);
            double e = 0.0;
            for (std::size_t k = 0; k < h.size(); ++k) {
                CHECK(h[k] == doctest::Approx(h[h.size() - 1 - k]).epsilon(1e-12));
                CHECK(std::isfinite(h[k]));
                e += h[k] * h[k];
            }
            CHECK(e == doctest::Approx(static_cast<double>(sps)).epsilon(1e-12));
        }
    }
}

TEST_CASE("RRC cascade is close to a zero-ISI raised cosine")
{
    const std::size_t sps = 8, span = 16;
    const auto h = rrc_taps(sps, 0.35, span);
    std::vector<double> rc(2 * h.size() - 1, 0.0);
    for (std::size_t i = 0; i < h.size(); ++i)
        for (std::size_t j = 0; j < h.size(); ++j)
            rc[i + j] += h[i] * h[j];
    const std::size_t c = h.size() - 1;
    for (std::size_t m = 1; m * sps <= c; ++m) {
        CHECK(std::abs(rc[c + m * sps]) < 0.01 * rc[c]);
        CHECK(std::abs(rc[c - m * sps]) < 0.01 * rc[c]);
    }
}

TEST_CASE("pulse_shape of an isolated unit symbol reproduces the RRC response")
{
    FrameSpec spec;
    const std::size_t sps = spec.samples_per_symbol;
    const auto h = rrc_taps(sps, spec.rrc_rolloff, spec.rrc_span_symbols);
    std::vector<Sample> syms(17, Sample{0.0, 0.0});
    syms[8] = 1.0;
    const auto out = pulse_shape(syms, spec);
    REQUIRE(out.size() == syms.size() * sps);
    const std::ptrdiff_t centre = static_cast<std::ptrdiff_t>(h.size() / 2);
    for (std::ptrdiff_t d = -centre; d <= centre; ++d) {
        const auto n = static_cast<std::size_t>(8 * static_cast<std::ptrdiff_t>(sps) + d);
        CHECK(out[n].real() == doctest::Approx(h[static_cast<std::size_t>(centre + d)]).epsilon(1e-12));
        CHECK(out[n].imag() == 0.0);
    }
}

TEST_CASE("pulse_shape is deterministic and rejects empty input")
{
    FrameSpec spec;
    const auto syms = amc::test::random_unit_power(64, 3);
    CHECK(pulse_shape(syms, spec) == pulse_shape(syms, spec));
    CHECK_THROWS_AS(pulse_shape(std::vector<Sample>{}, spec), EmptyInputError);
    spec.samples_per_symbol = 1;
    CHECK_THROWS(pulse_shape(syms, spec));
}

TEST_CASE("FrameSpec defaults and validation")
{
    FrameSpec spec;
    CHECK(spec.frame_length == 1024);
    CHECK(spec.symbols_per_frame() == 128);
    CHECK(acquisition_time(spec.frame_length, spec.sample_rate_hz) == doctest::Approx(5.12e-3));
    spec.frame_length = 1000;
    spec.samples_per_symbol = 3;
    CHECK_THROWS_AS(spec.validate(), ParameterError);
    spec = FrameSpec{};
    spec.rrc_rolloff = 0.0;
    CHECK_THROWS_AS(spec.validate(), ParameterError);
}

TEST_CASE("clean frames: length, finiteness, unit power, determinism")
{
    FrameSpec spec;
    spec.master_seed = 99;
    for (auto m : kAllModulations) {
        CAPTURE(name(m));
        const auto a = synthesize_clean_frame(m, spec, 7);
        const auto b = synthesize_clean_frame(m, spec, 7);
        const auto c = synthesize_clean_frame(m, spec, 8);
        REQUIRE(a.samples.size() == 1024);
        CHECK(a.scheme == m);
        CHECK_FALSE(a.snr_db.has_value());
        CHECK(a.samples == b.samples);
        CHECK(a.frame_seed == frame_seed(99, m, 7));
        CHECK(a.samples != c.samples);
        for (auto s : a.samples)
            CHECK((std::isfinite(s.real()) && std::isfinite(s.imag())));
        CHECK(mean_power(a.samples) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("frames regenerate identically in any order")
{
    FrameSpec spec;
    spec.master_seed = 5;
    std::vector<std::vector<Sample>> forward;
    for (std::uint64_t i = 0; i < 6; ++i)
        forward.push_back(synthesize_clean_frame(Modulation::QAM64, spec, i).samples);
    for (std::uint64_t i = 6; i-- > 0;)
        CHECK(synthesize_clean_frame(Modulation::QAM64, spec, i).samples == forward[i]);
}

TEST_CASE("digital frames average unit power over 1000 frames")
{
    FrameSpec spec;
    spec.master_seed = 1;
    for (auto m : kAllModulations) {
        if (kind(m) != ModulationKind::Digital)
            continue;
        CAPTURE(name(m));
        double total = 0.0;
        for (std::uint64_t i = 0; i < 1000; ++i)
            total += mean_power(synthesize_clean_frame(m, spec, i).samples);
        const double avg = total / 1000.0;
        CHECK(avg >= 0.95);
        CHECK(avg <= 1.05);
    }
}

TEST_CASE("frequency-modulated schemes have a constant envelope")
{
    FrameSpec spec;
    spec.master_seed = 17;
    for (std::uint64_t i = 0; i < 20; ++i) {
        CHECK(envelope_cv(synthesize_clean_frame(Modulation::CPFSK, spec, i).samples) < 0.05);
        CHECK(envelope_cv(synthesize_clean_frame(Modulation::WBFM, spec, i).samples) < 0.05);
        CHECK(envelope_cv(synthesize_clean_frame(Modulation::GFSK, spec, i).samples) < 0.15);
    }
}

TEST_CASE("analog source: peak, mean and bandwidth")
{
    const double fs = 200'000.0;
    for (std::uint64_t seed : {1ull, 2ull, 77ull, 123456789ull}) {
        const auto x = synth_analog_source(1024, seed, fs);
        REQUIRE(x.size() == 1024);
        double peak = 0.0, mean = 0.0;
        for (double v : x) {
            peak = std::max(peak, std::abs(v));
            mean += v;
        }
        mean /= static_cast<double>(x.size());
        CHECK(peak <= 1.0 + 1e-12);
        CHECK(std::abs(mean) <= 1e-2 * peak);

        std::vector<std::complex<double>> xc(x.begin(), x.end());
        const auto X = amc::test::oracle_dft(xc, x.size());
        double total = 0.0, above = 0.0;
        for (std::size_t k = 0; k < X.size(); ++k) {
            const double f = (k <= X.size() / 2 ? static_cast<double>(k)
                                                : static_cast<double>(k) - static_cast<double>(X.size())) *
                             fs / static_cast<double>(X.size());
            total += std::norm(X[k]);
            if (std::abs(f) > 15'000.0)
                above += std::norm(X[k]);
        }
        CHECK(above < 0.01 * total);
    }
    CHECK_THROWS_AS(synth_analog_source(0, 1), ParameterError);
}

TEST_CASE("AM-SSB keeps the upper sideband")
{
    FrameSpec spec;
    spec.master_seed = 3;
    const auto f = synthesize_clean_frame(Modulation::AMSSB, spec, 0);
    // Hann-weighted spectrum to keep leakage from the frame edges small.
    std::vector<std::complex<double>> w(f.samples.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = f.samples[i] * (0.5 - 0.5 * std::cos(2.0 * 3.141592653589793 * i / (w.size() - 1)));
    const auto X = amc::test::oracle_dft(w, w.size());
    double pos = 0.0, neg = 0.0;
    for (std::size_t k = 1; k < X.size() / 2; ++k) {
        pos += std::norm(X[k]);
        neg += std::norm(X[X.size() - k]);
    }
    CHECK(neg < 0.05 * pos);
}

TEST_CASE("property: random frame geometry keeps length and power")
{
    Gen g(2024);
    for (int c = 0; c < amc::test::kPropertyCases; ++c) {
        FrameSpec spec;
        spec.samples_per_symbol = g.pick(std::vector<std::size_t>{2, 4, 8, 16});
        spec.frame_length = spec.samples_per_symbol * g.index(16, 256);
        spec.rrc_rolloff = g.real(0.1, 1.0);
        spec.master_seed = g.u64();
        const Modulation m = kAllModulations[g.index(0, 10)];
        CAPTURE(name(m));
        const auto f = synthesize_clean_frame(m, spec, g.index(0, 1000));
        CHECK(f.samples.size() == spec.frame_length);
        CHECK(mean_power(f.samples) == doctest::Approx(1.0).epsilon(1e-9));
    }
}
