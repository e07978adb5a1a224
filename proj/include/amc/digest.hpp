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

#ifndef AMC_DIGEST_HPP_
#define AMC_DIGEST_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

namespace amc {

/** @brief Lowercase hex SHA-256 of a byte buffer. */
std::string sha256_hex(std::span<const std::uint8_t> bytes);

/** @brief Lowercase hex SHA-256 of a file's contents. */
std::string sha256_file(const std::filesystem::path& path);

} // namespace amc

#endif /* AMC_DIGEST_HPP_ */
