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

#ifndef AMC_CONFIG_HPP_
#define AMC_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "amc/channel.hpp"
#include "amc/dataset.hpp"
#include "amc/dnn.hpp"
#include "amc/stft.hpp"
#include "amc/train.hpp"
#include "amc/wavegen.hpp"

namespace amc {

// JSON mappings. Readers accept partial objects; missing keys keep defaults.
void to_json(nlohmann::json& j, const FrameSpec& v);
void from_json(const nlohmann::json& j, FrameSpec& v);
void to_json(nlohmann::json& j, const FadingSpec& v);
void from_json(const nlohmann::json& j, FadingSpec& v);
void to_json(nlohmann::json& j, const ImpairmentRanges& v);
void from_json(const nlohmann::json& j, ImpairmentRanges& v);
void to_json(nlohmann::json& j, const SpectrogramConfig& v);
/** Accepts {"preset": "transformed"|"highres"} with optional overrides. */
void from_json(const nlohmann::json& j, SpectrogramConfig& v);
void to_json(nlohmann::json& j, const DatasetConfig& v);
void from_json(const nlohmann::json& j, DatasetConfig& v);
void to_json(nlohmann::json& j, const TrainConfig& v);
void from_json(const nlohmann::json& j, TrainConfig& v);
void to_json(nlohmann::json& j, const LayerSpec& v);
void from_json(const nlohmann::json& j, LayerSpec& v);
void to_json(nlohmann::json& j, const NetSpec& v);
void from_json(const nlohmann::json& j, NetSpec& v);

/** @brief Named, immutable spectrogram presets ("transformed", "highres"). */
SpectrogramConfig spectrogram_preset(std::string_view name);

/** @brief Everything a CLI run needs, loaded from one JSON document. */
struct PipelineConfig {
    /** Master seed; drives frame synthesis, splits, initialization and shuffling. */
    std::optional<std::uint64_t> seed;
    DatasetConfig dataset;
    TrainConfig train;
    /** Layer stack; empty means NetSpec::default_net for the dataset's classes. */
    std::optional<NetSpec> net;
    std::filesystem::path output_dir = "amc_out";

    /** @brief Propagate the master seed into every sub-config. */
    void apply_seed(std::uint64_t seed);

    /** @brief Network for the configured image size and class count. */
    NetSpec net_spec() const;

    void validate() const;

    nlohmann::json to_json() const;
    static PipelineConfig from_json(const nlohmann::json& j);
    static PipelineConfig load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;
};

} // namespace amc

#endif /* AMC_CONFIG_HPP_ */
