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

#include "amc/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "amc/config.hpp"
#include "amc/error.hpp"

namespace amc {

static_assert(std::endian::native == std::endian::little, "little-endian host required");

namespace {

constexpr const char* kMagic = "AMCNET 1";

std::string read_line(std::istream& in, const std::string& path)
{
    std::string line;
    if (!std::getline(in, line))
        throw FormatError(path + ": truncated checkpoint header");
    return line;
}

std::string strip_prefix(const std::string& line, const std::string& key, const std::string& path)
{
    if (line.rfind(key + " ", 0) != 0)
        throw FormatError(path + ": expected '" + key + "' line");
    return line.substr(key.size() + 1);
}

template <typename T>
void put(std::ostream& out, T v)
{
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in, const std::string& path)
{
    T v{};
    if (!in.read(reinterpret_cast<char*>(&v), sizeof(T)))
        throw FormatError(path + ": truncated parameter data");
    return v;
}

} // namespace

void save_checkpoint(const std::filesystem::path& path, const Network& net,
                     const std::vector<std::string>& class_names)
{
    if (class_names.size() != net.num_classes())
        throw ParameterError("checkpoint: class name count does not match the network");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot create " + path.string());

    const auto params = net.parameters();
    out << kMagic << '\n';
    out << "netspec " << nlohmann::json(net.spec()).dump() << '\n';
    out << "classes " << nlohmann::json(class_names).dump() << '\n';
    out << "params " << params.size() << '\n';
    out << "end\n";
    for (const Parameter* p : params) {
        put(out, static_cast<std::uint32_t>(p->value.rows()));
        put(out, static_cast<std::uint32_t>(p->value.cols()));
        const Matrix& m = p->value;
        for (Eigen::Index i = 0; i < m.size(); ++i)
            put(out, static_cast<float>(m.data()[i]));
    }
    if (!out)
        throw IoError("write failed: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path)
{
    const std::string p = path.string();
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + p);

    if (read_line(in, p) != kMagic)
        throw FormatError(p + ": not a network checkpoint");
    NetSpec spec;
    std::vector<std::string> names;
    std::size_t count = 0;
    try {
        spec = nlohmann::json::parse(strip_prefix(read_line(in, p), "netspec", p)).get<NetSpec>();
        names = nlohmann::json::parse(strip_prefix(read_line(in, p), "classes", p))
                    .get<std::vector<std::string>>();
        count = std::stoul(strip_prefix(read_line(in, p), "params", p));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(p + ": " + e.what());
    } catch (const std::logic_error&) {
        throw FormatError(p + ": bad parameter count");
    }
    if (read_line(in, p) != "end")
        throw FormatError(p + ": missing header terminator");

    Network net(spec);
    if (names.size() != net.num_classes())
        throw FormatError(p + ": class list does not match the network");
    auto params = net.parameters();
    if (params.size() != count)
        throw FormatError(p + ": parameter count mismatch");
    for (Parameter* param : params) {
        const auto rows = get<std::uint32_t>(in, p);
        const auto cols = get<std::uint32_t>(in, p);
        if (rows != param->value.rows() || cols != param->value.cols())
            throw FormatError(p + ": shape mismatch for " + param->name);
        for (Eigen::Index i = 0; i < param->value.size(); ++i)
            param->value.data()[i] = get<float>(in, p);
    }
    if (in.peek() != std::char_traits<char>::eof())
        throw FormatError(p + ": trailing bytes");
    return {std::move(net), std::move(names)};
}

} // namespace amc
