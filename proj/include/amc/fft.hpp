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

#ifndef AMC_FFT_HPP_
#define AMC_FFT_HPP_

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace amc {

constexpr bool is_power_of_two(std::size_t n) noexcept
{
    return n != 0 && (n & (n - 1)) == 0;
}

/** @brief Radix-2 decimation-in-time FFT plan for one power-of-two size.
 *
 * Twiddles and the bit-reversal permutation are computed once; forward() is
 * const and may be called concurrently on distinct buffers.
 */
class Fft {
public:
    using C = std::complex<double>;

    explicit Fft(std::size_t n);

    std::size_t size() const { return n_; }

    /** @brief In-place forward transform, X[k] = sum x[n] exp(-2 pi i k n / N). */
    void forward(std::span<C> data) const;

private:
    std::size_t n_;
    std::vector<C> twiddles_;
    std::vector<std::uint32_t> bitrev_;
};

/** @brief Direct O(N^2) DFT of a segment zero-padded to nfft. Reference path. */
std::vector<std::complex<double>> naive_dft(std::span<const std::complex<double>> segment,
                                            std::size_t nfft);

} // namespace amc

#endif /* AMC_FFT_HPP_ */
