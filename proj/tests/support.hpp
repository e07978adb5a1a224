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

#ifndef AMC_TESTS_SUPPORT_HPP_
#define AMC_TESTS_SUPPORT_HPP_

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "amc/seed.hpp"
#include "amc/wavegen.hpp"

namespace amc::test {

/** Scratch directory removed on scope exit. */
class TempDir {
public:
    explicit TempDir(const std::string& tag)
    {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("amc_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

private:
    std::filesystem::path path_;
};

/** Small seeded generator for property tests. */
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    std::size_t index(std::size_t lo, std::size_t hi)  // inclusive
    {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }
    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
    std::uint64_t u64() { return rng_(); }
    bool coin() { return (rng_() & 1u) != 0; }

    std::vector<std::complex<double>> complex_vec(std::size_t n)
    {
        std::vector<std::complex<double>> v(n);
        for (auto& x : v)
            x = {normal(), normal()};
        return v;
    }

    template <typename T>
    const T& pick(const std::vector<T>& v)
    {
        return v[index(0, v.size() - 1)];
    }

    Rng& rng() { return rng_; }

private:
    Rng rng_;
};

inline constexpr int kPropertyCases = 50;

inline IQFrame make_frame(std::vector<Sample> samples, double fs = 200'000.0)
{
    IQFrame f;
    f.samples = std::move(samples);
    f.sample_rate_hz = fs;
    return f;
}

/** Complex exponential exp(i(2*pi*f*n/fs + phase)). */
inline std::vector<Sample> tone(std::size_t n, double f_hz, double fs = 200'000.0,
                                double phase = 0.0)
{
    std::vector<Sample> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = std::polar(1.0, 2.0 * 3.14159265358979323846 * f_hz * static_cast<double>(i) / fs +
                                   phase);
    return v;
}

/** Direct DFT written independently of the library, used as an oracle. */
inline std::vector<std::complex<double>> oracle_dft(const std::vector<std::complex<double>>& x,
                                                    std::size_t n)
{
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        long double re = 0.0L, im = 0.0L;
        for (std::size_t i = 0; i < x.size() && i < n; ++i) {
            const long double a = -2.0L * 3.141592653589793238462643383279L *
                                  static_cast<long double>((k * i) % n) / static_cast<long double>(n);
            re += x[i].real() * std::cos(a) - x[i].imag() * std::sin(a);
            im += x[i].real() * std::sin(a) + x[i].imag() * std::cos(a);
        }
        out[k] = {static_cast<double>(re), static_cast<double>(im)};
    }
    return out;
}

/** Unit-power random QPSK-like sequence. */
inline std::vector<Sample> random_unit_power(std::size_t n, std::uint64_t seed)
{
    Gen g(seed);
    std::vector<Sample> v(n);
    const double a = 1.0 / std::sqrt(2.0);
    for (auto& x : v)
        x = {g.coin() ? a : -a, g.coin() ? a : -a};
    return v;
}

} // namespace amc::test

#endif /* AMC_TESTS_SUPPORT_HPP_ */
