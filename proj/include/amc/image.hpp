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

#ifndef AMC_IMAGE_HPP_
#define AMC_IMAGE_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace amc {

/** @brief 8-bit image, row-major with interleaved channels (1 or 3). */
struct Image {
    std::size_t height = 0;
    std::size_t width = 0;
    std::size_t channels = 1;
    std::vector<std::uint8_t> pixels;

    std::uint8_t at(std::size_t y, std::size_t x, std::size_t c = 0) const
    {
        return pixels[(y * width + x) * channels + c];
    }

    bool operator==(const Image&) const = default;
};

/** @brief Bilinear resize of a single-channel real grid (half-pixel centres). */
std::vector<double> resize_bilinear(std::span<const double> src, std::size_t src_h,
                                    std::size_t src_w, std::size_t dst_h, std::size_t dst_w);

/** @brief Map a level in [0,255] to an RGB triple (perceptual blue-green-yellow ramp). */
void colormap(double level, std::uint8_t rgb[3]) noexcept;

std::vector<std::uint8_t> encode_png(const Image& img);
Image decode_png(std::span<const std::uint8_t> bytes);

void write_png(const std::filesystem::path& path, const Image& img);
Image read_png(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

} // namespace amc

#endif /* AMC_IMAGE_HPP_ */
