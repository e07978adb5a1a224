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

#ifndef AMC_SRC_DB_SCALE_HPP_
#define AMC_SRC_DB_SCALE_HPP_

#include <complex>
#include <cstddef>

namespace amc::detail {

// out[j] = max(10*log10(|spec[(j + shift) mod nfft]|^2), floor_db) for j < n_out.
// nfft must be a power of two.
void power_to_db(const std::complex<double>* spec, std::size_t nfft, std::size_t shift,
                 std::size_t n_out, double floor_db, double* out);

} // namespace amc::detail

#endif /* AMC_SRC_DB_SCALE_HPP_ */
