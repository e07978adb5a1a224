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

#ifndef AMC_IQ_ARCHIVE_HPP_
#define AMC_IQ_ARCHIVE_HPP_

#include <filesystem>
#include <span>
#include <vector>

#include "amc/wavegen.hpp"

namespace amc {

/*
 * IQ archive layout (all little-endian):
 *
 *   "IQF1"                 4 bytes magic
 *   frame count            u32
 *   frame length           u32
 *   sample rate (Hz)       f64
 *   frames                 count * length * (I f32, Q f32)
 *
 * The sidecar "<archive>.meta" holds one record per frame:
 *
 *   <index> <scheme> <snr_db|clean> <frame_seed>
 *
 * Lines starting with '#' are comments.
 */

std::filesystem::path iq_sidecar_path(const std::filesystem::path& archive);

/** @brief Write frames (all the same length and rate) plus the sidecar. */
void write_iq_archive(const std::filesystem::path& path, std::span<const IQFrame> frames);

/** @brief Read an archive. Fails closed with FormatError; never returns partial data. */
std::vector<IQFrame> ingest_iq_archive(const std::filesystem::path& path);

} // namespace amc

#endif /* AMC_IQ_ARCHIVE_HPP_ */
