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
#include <cmath>

#include "amc/error.hpp"
#include "amc/image.hpp"
#include "support.hpp"

using namespace amc;
using amc::test::Gen;

namespace {

Image random_image(Gen& g, std::size_t h, std::size_t w, std::size_t c)
{
    Image img;
    img.height = h;
    img.width = w;
    img.channels = c;
    img.pixels.resize(h * w * c);
    for (auto& p : img.pixels)
        p = static_cast<std::uint8_t>(g.index(0, 255));
    return img;
}

} // namespace

TEST_CASE("PNG round trip, gray and RGB")
{
    Gen g(1);
    for (int c = 0; c < 20; ++c) {
        const auto img = random_image(g, g.index(1, 70), g.index(1, 70), g.coin() ? 1 : 3);
        const auto bytes = encode_png(img);
        REQUIRE(bytes.size() > 8);
        CHECK(bytes[1] == 'P');
        CHECK(decode_png(bytes) == img);
    }
}

TEST_CASE("PNG encoding is byte-stable")
{
    Gen g(2);
    const auto img = random_image(g, 32, 32, 1);
    CHECK(encode_png(img) == encode_png(img));
}

TEST_CASE("PNG file helpers")
{
    amc::test::TempDir dir("png");
    Gen g(3);
    const auto img = random_image(g, 12, 9, 3);
    write_png(dir / "a.png", img);
    CHECK(read_png(dir / "a.png") == img);
    CHECK_THROWS_AS(read_png(dir / "missing.png"), IoError);
}

TEST_CASE("malformed PNG data is a format error")
{
    Gen g(4);
    const auto bytes = encode_png(random_image(g, 16, 16, 1));
    const std::vector<std::uint8_t> garbage(100, 0x5a);
    CHECK_THROWS_AS(decode_png(garbage), FormatError);
    CHECK_THROWS_AS(decode_png(std::span(bytes).first(4)), FormatError);
    CHECK_THROWS_AS(decode_png(std::span(bytes).first(bytes.size() / 2)), FormatError);
    auto flipped = bytes;
    flipped[bytes.size() / 2] ^= 0xff;
    CHECK_THROWS_AS(decode_png(flipped), FormatError);
}

TEST_CASE("PNG encoder rejects bad buffers")
{
    Image img;
    img.height = 2;
    img.width = 2;
    img.channels = 2;
    img.pixels.resize(8);
    CHECK_THROWS_AS(encode_png(img), ParameterError);
    img.channels = 1;
    CHECK_THROWS_AS(encode_png(img), ParameterError);
}

TEST_CASE("bilinear resize reproduces an affine ramp")
{
    // Bilinear interpolation is exact for affine functions at clamped coordinates.
    Gen g(5);
    for (int c = 0; c < amc::test::kPropertyCases; ++c) {
        const std::size_t sh = g.index(1, 20), sw = g.index(1, 20);
        const std::size_t dh = g.index(1, 40), dw = g.index(1, 40);
        const double a = g.real(-3.0, 3.0), b = g.real(-3.0, 3.0), k = g.real(-10.0, 10.0);
        std::vector<double> src(sh * sw);
        for (std::size_t y = 0; y < sh; ++y)
            for (std::size_t x = 0; x < sw; ++x)
                src[y * sw + x] = a * static_cast<double>(y) + b * static_cast<double>(x) + k;
        const auto dst = resize_bilinear(src, sh, sw, dh, dw);
        REQUIRE(dst.size() == dh * dw);
        for (std::size_t y = 0; y < dh; ++y) {
            const double sy = std::clamp((y + 0.5) * static_cast<double>(sh) / dh - 0.5, 0.0,
                                         static_cast<double>(sh - 1));
            for (std::size_t x = 0; x < dw; ++x) {
                const double sx = std::clamp((x + 0.5) * static_cast<double>(sw) / dw - 0.5, 0.0,
                                             static_cast<double>(sw - 1));
                CHECK(dst[y * dw + x] == doctest::Approx(a * sy + b * sx + k).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("bilinear resize identity and range")
{
    Gen g(6);
    std::vector<double> src(35);
    for (auto& v : src)
        v = g.real(0.0, 255.0);
    CHECK(resize_bilinear(src, 5, 7, 5, 7) == src);
    const auto up = resize_bilinear(src, 5, 7, 50, 3);
    const auto [lo, hi] = std::minmax_element(src.begin(), src.end());
    for (double v : up) {
        CHECK(v >= *lo - 1e-9);
        CHECK(v <= *hi + 1e-9);
    }
    CHECK_THROWS_AS(resize_bilinear(src, 5, 6, 4, 4), ParameterError);
}
