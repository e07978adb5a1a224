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

#include "amc/iq_archive.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "amc/error.hpp"
#include "amc/image.hpp"

namespace amc {

namespace {

constexpr char kMagic[4] = {'I', 'Q', 'F', '1'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 8;

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value)
{
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    const auto bits = std::bit_cast<U>(value);
    for (std::size_t i = 0; i < sizeof(U); ++i)
        out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

template <typename T>
T get_le(const std::uint8_t* p)
{
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i)
        bits |= static_cast<U>(p[i]) << (8 * i);
    return std::bit_cast<T>(bits);
}

} // namespace

std::filesystem::path iq_sidecar_path(const std::filesystem::path& archive)
{
    auto p = archive;
    p += ".meta";
    return p;
}

void write_iq_archive(const std::filesystem::path& path, std::span<const IQFrame> frames)
{
    const std::size_t len = frames.empty() ? 0 : frames.front().samples.size();
    const double fs = frames.empty() ? 0.0 : frames.front().sample_rate_hz;
    for (const auto& f : frames)
        if (f.samples.size() != len || f.sample_rate_hz != fs)
            throw ParameterError("IQ archive frames must share length and sample rate");

    std::vector<std::uint8_t> bytes;
    bytes.reserve(kHeaderBytes + frames.size() * len * 8);
    bytes.insert(bytes.end(), kMagic, kMagic + 4);
    put_le(bytes, static_cast<std::uint32_t>(frames.size()));
    put_le(bytes, static_cast<std::uint32_t>(len));
    put_le(bytes, fs);
    for (const auto& f : frames)
        for (const auto& s : f.samples) {
            put_le(bytes, static_cast<float>(s.real()));
            put_le(bytes, static_cast<float>(s.imag()));
        }
    write_file(path, bytes);

    std::ostringstream meta;
    meta.precision(17);
    meta << "# index scheme snr_db frame_seed\n";
    for (std::size_t i = 0; i < frames.size(); ++i) {
        meta << i << ' ' << name(frames[i].scheme) << ' ';
        if (frames[i].snr_db)
            meta << *frames[i].snr_db;
        else
            meta << "clean";
        meta << ' ' << frames[i].frame_seed << '\n';
    }
    const auto text = meta.str();
    write_file(iq_sidecar_path(path),
               {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

std::vector<IQFrame> ingest_iq_archive(const std::filesystem::path& path)
{
    std::vector<std::uint8_t> bytes;
    try {
        bytes = read_file(path);
    } catch (const IoError& e) {
        throw FormatError(e.what());
    }
    if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw FormatError(path.string() + ": bad magic");
    const auto count = get_le<std::uint32_t>(bytes.data() + 4);
    const auto len = get_le<std::uint32_t>(bytes.data() + 8);
    const auto fs = get_le<double>(bytes.data() + 12);
    const std::size_t expected = kHeaderBytes + std::size_t{count} * len * 8;
    if (bytes.size() != expected)
        throw FormatError(path.string() + ": expected " + std::to_string(expected) +
                          " bytes, found " + std::to_string(bytes.size()));

    std::ifstream meta(iq_sidecar_path(path));
    if (!meta)
        throw FormatError(iq_sidecar_path(path).string() + ": missing sidecar");

    std::vector<IQFrame> frames(count);
    std::size_t records = 0;
    for (std::string line; std::getline(meta, line);) {
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream rec(line);
        std::size_t index = 0;
        std::string scheme, snr;
        std::uint64_t seed = 0;
        if (!(rec >> index >> scheme >> snr >> seed) || index >= count)
            throw FormatError(iq_sidecar_path(path).string() + ": bad record '" + line + "'");
        auto& f = frames[index];
        try {
            f.scheme = parse_modulation(scheme);
            if (snr != "clean")
                f.snr_db = std::stod(snr);
        } catch (const std::exception&) {
            throw FormatError(iq_sidecar_path(path).string() + ": bad record '" + line + "'");
        }
        f.frame_seed = seed;
        ++records;
    }
    if (records != count)
        throw FormatError(iq_sidecar_path(path).string() + ": " + std::to_string(records) +
                          " records for " + std::to_string(count) + " frames");

    const std::uint8_t* p = bytes.data() + kHeaderBytes;
    for (auto& f : frames) {
        f.sample_rate_hz = fs;
        f.samples.resize(len);
        for (auto& s : f.samples) {
            s = {get_le<float>(p), get_le<float>(p + 4)};
            p += 8;
        }
    }
    return frames;
}

} // namespace amc
