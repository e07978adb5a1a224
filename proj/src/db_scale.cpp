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

// Built with -ffast-math so the log loop maps onto the vector math library.

#include "db_scale.hpp"

#include <algorithm>
#include <cmath>

namespace amc::detail {

void power_to_db(const std::complex<double>* spec, std::size_t nfft, std::size_t shift,
                 std::size_t n_out, double floor_db, double* out)
{
    const std::size_t mask = nfft - 1;
    for (std::size_t j = 0; j < n_out; ++j) {
        const auto& c = spec[(j + shift) & mask];
        out[j] = c.real() * c.real() + c.imag() * c.imag();
    }
    const double tiny = std::pow(10.0, floor_db / 10.0);
    for (std::size_t j = 0; j < n_out; ++j)
        out[j] = std::max(10.0 * std::log10(std::max(out[j], tiny)), floor_db);
}

} // namespace amc::detail
