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

#include "amc/image.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "amc/error.hpp"

namespace amc {

namespace {

// Viridis-like control points at levels 0, 64, 128, 192, 255.
constexpr std::array<std::array<double, 3>, 5> kRamp = {{
    {68, 1, 84},
    {59, 82, 139},
    {33, 145, 140},
    {94, 201, 98},
    {253, 231, 37},
}};

void write_cb(png_structp png, png_bytep data, png_size_t len)
{
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + len);
}

void flush_cb(png_structp) {}

struct ReadCursor {
    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;
};

void read_cb(png_structp png, png_bytep data, png_size_t len)
{
    auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
    if (cur->pos + len > cur->bytes.size())
        png_error(png, "truncated PNG stream");
    std::memcpy(data, cur->bytes.data() + cur->pos, len);
    cur->pos += len;
}

[[noreturn]] void error_cb(png_structp, png_const_charp msg)
{
    throw FormatError(std::string("png: ") + msg);
}

void warning_cb(png_structp, png_const_charp) {}

} // namespace

std::vector<double> resize_bilinear(std::span<const double> src, std::size_t src_h,
                                    std::size_t src_w, std::size_t dst_h, std::size_t dst_w)
{
    if (src.size() != src_h * src_w || src_h == 0 || src_w == 0)
        throw ParameterError("resize_bilinear: bad source shape");
    std::vector<double> dst(dst_h * dst_w);

    auto coords = [](std::size_t d, std::size_t dn, std::size_t sn) {
        double s = (static_cast<double>(d) + 0.5) * static_cast<double>(sn) /
                       static_cast<double>(dn) -
                   0.5;
        s = std::clamp(s, 0.0, static_cast<double>(sn - 1));
        const auto i0 = static_cast<std::size_t>(std::floor(s));
        const std::size_t i1 = std::min(i0 + 1, sn - 1);
        return std::tuple{i0, i1, s - static_cast<double>(i0)};
    };

    for (std::size_t y = 0; y < dst_h; ++y) {
        const auto [y0, y1, fy] = coords(y, dst_h, src_h);
        for (std::size_t x = 0; x < dst_w; ++x) {
            const auto [x0, x1, fx] = coords(x, dst_w, src_w);
            const double top = src[y0 * src_w + x0] * (1.0 - fx) + src[y0 * src_w + x1] * fx;
            const double bot = src[y1 * src_w + x0] * (1.0 - fx) + src[y1 * src_w + x1] * fx;
            dst[y * dst_w + x] = top * (1.0 - fy) + bot * fy;
        }
    }
    return dst;
}

void colormap(double level, std::uint8_t rgb[3]) noexcept
{
    const double t = std::clamp(level, 0.0, 255.0) / 255.0 * (kRamp.size() - 1);
    const auto i = std::min(static_cast<std::size_t>(t), kRamp.size() - 2);
    const double f = t - static_cast<double>(i);
    for (int c = 0; c < 3; ++c) {
        const double v = kRamp[i][c] * (1.0 - f) + kRamp[i + 1][c] * f;
        rgb[c] = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
    }
}

std::vector<std::uint8_t> encode_png(const Image& img)
{
    if (img.channels != 1 && img.channels != 3)
        throw ParameterError("encode_png: only 1 or 3 channels are supported");
    if (img.pixels.size() != img.height * img.width * img.channels || img.height == 0 ||
        img.width == 0)
        throw ParameterError("encode_png: pixel buffer does not match dimensions");

    std::vector<std::uint8_t> out;
    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, error_cb, warning_cb);
    if (!png)
        throw Error("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    try {
        png_set_write_fn(png, &out, write_cb, flush_cb);
        png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
                     static_cast<png_uint_32>(img.height), 8,
                     img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                     PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
        png_write_info(png, info);
        const std::size_t stride = img.width * img.channels;
        for (std::size_t y = 0; y < img.height; ++y)
            png_write_row(png, const_cast<png_bytep>(img.pixels.data() + y * stride));
        png_write_end(png, nullptr);
    } catch (...) {
        png_destroy_write_struct(&png, &info);
        throw;
    }
    png_destroy_write_struct(&png, &info);
    return out;
}

Image decode_png(std::span<const std::uint8_t> bytes)
{
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0)
        throw FormatError("not a PNG stream");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, error_cb, warning_cb);
    if (!png)
        throw Error("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    ReadCursor cur{bytes, 0};
    Image img;
    try {
        png_set_read_fn(png, &cur, read_cb);
        png_read_info(png, info);
        const auto color = png_get_color_type(png, info);
        const auto depth = png_get_bit_depth(png, info);
        if (depth == 16)
            png_set_strip_16(png);
        if (color == PNG_COLOR_TYPE_PALETTE)
            png_set_palette_to_rgb(png);
        if (color == PNG_COLOR_TYPE_GRAY && depth < 8)
            png_set_expand_gray_1_2_4_to_8(png);
        if (color & PNG_COLOR_MASK_ALPHA)
            png_set_strip_alpha(png);
        png_read_update_info(png, info);

        img.width = png_get_image_width(png, info);
        img.height = png_get_image_height(png, info);
        img.channels = png_get_channels(png, info);
        img.pixels.resize(img.width * img.height * img.channels);
        const std::size_t stride = img.width * img.channels;
        if (png_get_rowbytes(png, info) != stride)
            throw FormatError("png: unexpected row layout");
        for (std::size_t y = 0; y < img.height; ++y)
            png_read_row(png, img.pixels.data() + y * stride, nullptr);
        png_read_end(png, nullptr);
    } catch (...) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw;
    }
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void write_png(const std::filesystem::path& path, const Image& img)
{
    write_file(path, encode_png(img));
}

Image read_png(const std::filesystem::path& path)
{
    return decode_png(read_file(path));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad())
        throw IoError("read failed: " + path.string());
    return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot create " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out)
        throw IoError("write failed: " + path.string());
}

} // namespace amc
