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

#include "amc/fft.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "amc/error.hpp"

namespace amc {

Fft::Fft(std::size_t n) : n_(n)
{
    if (!is_power_of_two(n))
        throw ParameterError("FFT size " + std::to_string(n) + " is not a power of two");

    twiddles_.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double a = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        twiddles_[k] = {std::cos(a), std::sin(a)};
    }

    unsigned bits = 0;
    while ((std::size_t{1} << bits) < n)
        ++bits;
    bitrev_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t r = 0;
        for (unsigned b = 0; b < bits; ++b)
            r |= static_cast<std::uint32_t>(((i >> b) & 1u) << (bits - 1 - b));
        bitrev_[i] = r;
    }
}

void Fft::forward(std::span<C> data) const
{
    if (data.size() != n_)
        throw ParameterError("FFT buffer size mismatch");

    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j = bitrev_[i];
        if (i < j)
            std::swap(data[i], data[j]);
    }

    // Work on raw doubles; std::complex multiplication carries NaN handling
    // that blocks vectorization.
    auto* d = reinterpret_cast<double*>(data.data());
    const auto* tw = reinterpret_cast<const double*>(twiddles_.data());
    for (std::size_t len = 2; len <= n_; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n_ / len;
        for (std::size_t start = 0; start < n_; start += len) {
            double* a = d + 2 * start;
            double* b = d + 2 * (start + half);
            for (std::size_t k = 0; k < half; ++k) {
                const double wr = tw[2 * k * stride];
                const double wi = tw[2 * k * stride + 1];
                const double br = b[2 * k] * wr - b[2 * k + 1] * wi;
                const double bi = b[2 * k] * wi + b[2 * k + 1] * wr;
                const double ar = a[2 * k];
                const double ai = a[2 * k + 1];
                a[2 * k] = ar + br;
                a[2 * k + 1] = ai + bi;
                b[2 * k] = ar - br;
                b[2 * k + 1] = ai - bi;
            }
        }
    }
}

std::vector<std::complex<double>> naive_dft(std::span<const std::complex<double>> segment,
                                            std::size_t nfft)
{
    if (segment.size() > nfft)
        throw ParameterError("naive_dft: segment longer than nfft");
    std::vector<std::complex<double>> out(nfft);
    const double base = -2.0 * std::numbers::pi / static_cast<double>(nfft);
    for (std::size_t k = 0; k < nfft; ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t n = 0; n < segment.size(); ++n) {
            // Reduce k*n mod N first so the angle stays exact for large N.
            const auto kn = static_cast<double>((k * n) % nfft);
            acc += segment[n] * std::polar(1.0, base * kn);
        }
        out[k] = acc;
    }
    return out;
}

} // namespace amc
