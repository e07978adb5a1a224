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

#include "amc/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "amc/error.hpp"
#include "amc/seed.hpp"

namespace amc {

using nlohmann::json;

namespace {

template <typename T>
void read_opt(const json& j, const char* key, T& out)
{
    if (auto it = j.find(key); it != j.end() && !it->is_null())
        out = it->get<T>();
}

void require_object(const json& j, const char* what)
{
    if (!j.is_object())
        throw ParameterError(std::string(what) + ": expected a JSON object");
}

} // namespace

void to_json(json& j, const FrameSpec& v)
{
    j = json{{"frame_length", v.frame_length},
             {"samples_per_symbol", v.samples_per_symbol},
             {"sample_rate_hz", v.sample_rate_hz},
             {"rrc_rolloff", v.rrc_rolloff},
             {"rrc_span_symbols", v.rrc_span_symbols},
             {"master_seed", v.master_seed}};
}

void from_json(const json& j, FrameSpec& v)
{
    require_object(j, "frame");
    read_opt(j, "frame_length", v.frame_length);
    read_opt(j, "samples_per_symbol", v.samples_per_symbol);
    read_opt(j, "sample_rate_hz", v.sample_rate_hz);
    read_opt(j, "rrc_rolloff", v.rrc_rolloff);
    read_opt(j, "rrc_span_symbols", v.rrc_span_symbols);
    read_opt(j, "master_seed", v.master_seed);
}

void to_json(json& j, const FadingSpec& v)
{
    j = json{{"delay_taps", v.delay_taps}, {"tap_powers", v.tap_powers}};
    // JSON has no infinity.
    if (std::isinf(v.k_factor))
        j["k_factor"] = "inf";
    else
        j["k_factor"] = v.k_factor;
}

void from_json(const json& j, FadingSpec& v)
{
    require_object(j, "fading");
    if (auto it = j.find("k_factor"); it != j.end()) {
        if (it->is_string()) {
            if (it->get<std::string>() != "inf")
                throw ParameterError("fading.k_factor must be a number or \"inf\"");
            v.k_factor = std::numeric_limits<double>::infinity();
        } else {
            v.k_factor = it->get<double>();
        }
    }
    read_opt(j, "delay_taps", v.delay_taps);
    read_opt(j, "tap_powers", v.tap_powers);
}

void to_json(json& j, const ImpairmentRanges& v)
{
    j = json{{"cfo_max_hz", v.cfo_max_hz},
             {"sro_max_ppm", v.sro_max_ppm},
             {"random_phase", v.random_phase},
             {"fading", v.fading ? json(*v.fading) : json(nullptr)}};
}

void from_json(const json& j, ImpairmentRanges& v)
{
    require_object(j, "channel");
    read_opt(j, "cfo_max_hz", v.cfo_max_hz);
    read_opt(j, "sro_max_ppm", v.sro_max_ppm);
    read_opt(j, "random_phase", v.random_phase);
    if (auto it = j.find("fading"); it != j.end()) {
        if (it->is_null() || (it->is_boolean() && !it->get<bool>())) {
            v.fading.reset();
        } else {
            FadingSpec f;
            from_json(*it, f);
            v.fading = f;
        }
    }
}

SpectrogramConfig spectrogram_preset(std::string_view name)
{
    if (name == "transformed")
        return SpectrogramConfig::transformed();
    if (name == "highres")
        return SpectrogramConfig::highres();
    throw ParameterError("unknown spectrogram preset '" + std::string(name) + "'");
}

void to_json(json& j, const SpectrogramConfig& v)
{
    j = json{{"window", std::string(to_string(v.window))},
             {"kaiser_beta", v.kaiser_beta},
             {"window_len", v.window_len},
             {"overlap", v.overlap},
             {"nfft", v.nfft},
             {"db_floor", v.db_floor},
             {"two_sided", v.two_sided}};
}

void from_json(const json& j, SpectrogramConfig& v)
{
    if (j.is_string()) {
        v = spectrogram_preset(j.get<std::string>());
        return;
    }
    require_object(j, "spectrogram");
    if (auto it = j.find("preset"); it != j.end())
        v = spectrogram_preset(it->get<std::string>());
    if (auto it = j.find("window"); it != j.end())
        v.window = parse_window_kind(it->get<std::string>());
    read_opt(j, "kaiser_beta", v.kaiser_beta);
    read_opt(j, "window_len", v.window_len);
    read_opt(j, "overlap", v.overlap);
    read_opt(j, "nfft", v.nfft);
    read_opt(j, "db_floor", v.db_floor);
    read_opt(j, "two_sided", v.two_sided);
}

void to_json(json& j, const DatasetConfig& v)
{
    std::vector<std::string> schemes;
    for (auto m : v.schemes)
        schemes.emplace_back(name(m));
    j = json{{"schemes", schemes},
             {"samples_per_class", v.samples_per_class},
             {"snr_list_db", v.snr_list_db},
             {"layout", std::string(to_string(v.layout))},
             {"frame", v.frame},
             {"channel", v.channel},
             {"spectrogram", v.spectrogram},
             {"image_height", v.image_height},
             {"image_width", v.image_width},
             {"palette", std::string(to_string(v.palette))},
             {"folds", v.folds},
             {"split_seed", v.split_seed}};
}

void from_json(const json& j, DatasetConfig& v)
{
    require_object(j, "dataset");
    if (auto it = j.find("schemes"); it != j.end()) {
        v.schemes.clear();
        if (it->is_string() && it->get<std::string>() == "all") {
            v.schemes.assign(kAllModulations.begin(), kAllModulations.end());
        } else {
            for (const auto& s : *it)
                v.schemes.push_back(parse_modulation(s.get<std::string>()));
        }
    }
    read_opt(j, "samples_per_class", v.samples_per_class);
    read_opt(j, "snr_list_db", v.snr_list_db);
    if (auto it = j.find("layout"); it != j.end())
        v.layout = parse_snr_layout(it->get<std::string>());
    if (auto it = j.find("frame"); it != j.end())
        from_json(*it, v.frame);
    if (auto it = j.find("channel"); it != j.end())
        from_json(*it, v.channel);
    if (auto it = j.find("spectrogram"); it != j.end())
        from_json(*it, v.spectrogram);
    read_opt(j, "image_height", v.image_height);
    read_opt(j, "image_width", v.image_width);
    if (auto it = j.find("palette"); it != j.end())
        v.palette = parse_palette(it->get<std::string>());
    read_opt(j, "folds", v.folds);
    read_opt(j, "split_seed", v.split_seed);
}

void to_json(json& j, const TrainConfig& v)
{
    j = json{{"max_epochs", v.max_epochs},
             {"batch_size", v.batch_size},
             {"initial_lr", v.initial_lr},
             {"lr_drop_factor", v.lr_drop_factor},
             {"lr_drop_period_epochs", v.lr_drop_period_epochs},
             {"l2", v.l2},
             {"validation_frequency_iters", v.validation_frequency_iters},
             {"early_stop_patience", v.early_stop_patience},
             {"seed", v.seed},
             {"adam_beta1", v.adam_beta1},
             {"adam_beta2", v.adam_beta2},
             {"adam_epsilon", v.adam_epsilon}};
}

void from_json(const json& j, TrainConfig& v)
{
    require_object(j, "train");
    read_opt(j, "max_epochs", v.max_epochs);
    read_opt(j, "batch_size", v.batch_size);
    read_opt(j, "initial_lr", v.initial_lr);
    read_opt(j, "lr_drop_factor", v.lr_drop_factor);
    read_opt(j, "lr_drop_period_epochs", v.lr_drop_period_epochs);
    read_opt(j, "l2", v.l2);
    read_opt(j, "validation_frequency_iters", v.validation_frequency_iters);
    read_opt(j, "early_stop_patience", v.early_stop_patience);
    read_opt(j, "seed", v.seed);
    read_opt(j, "adam_beta1", v.adam_beta1);
    read_opt(j, "adam_beta2", v.adam_beta2);
    read_opt(j, "adam_epsilon", v.adam_epsilon);
}

void to_json(json& j, const LayerSpec& v)
{
    j = json{{"kind", std::string(to_string(v.kind))}};
    switch (v.kind) {
    case LayerSpec::Kind::Conv:
        j["kernel"] = v.kernel;
        j["channels"] = v.units;
        j["stride"] = v.stride;
        break;
    case LayerSpec::Kind::MaxPool:
        j["kernel"] = v.kernel;
        j["stride"] = v.stride;
        break;
    case LayerSpec::Kind::Dense:
        j["units"] = v.units;
        break;
    case LayerSpec::Kind::Dropout:
        j["rate"] = v.rate;
        break;
    default:
        break;
    }
}

void from_json(const json& j, LayerSpec& v)
{
    require_object(j, "layer");
    v = LayerSpec{};
    v.kind = parse_layer_kind(j.at("kind").get<std::string>());
    read_opt(j, "kernel", v.kernel);
    read_opt(j, "stride", v.stride);
    read_opt(j, "rate", v.rate);
    read_opt(j, "units", v.units);
    read_opt(j, "channels", v.units);
}

void to_json(json& j, const NetSpec& v)
{
    j = json{{"input", {v.input.height, v.input.width, v.input.channels}},
             {"layers", v.layers},
             {"init_seed", v.init_seed}};
}

void from_json(const json& j, NetSpec& v)
{
    require_object(j, "net");
    if (auto it = j.find("input"); it != j.end()) {
        const auto dims = it->get<std::vector<std::size_t>>();
        if (dims.size() != 3)
            throw ParameterError("net.input must be [height, width, channels]");
        v.input = {dims[0], dims[1], dims[2]};
    }
    read_opt(j, "layers", v.layers);
    read_opt(j, "init_seed", v.init_seed);
}

void PipelineConfig::apply_seed(std::uint64_t s)
{
    seed = s;
    dataset.frame.master_seed = s;
    dataset.split_seed = derive_seed(s, {seed_tag::kSplit});
    train.seed = derive_seed(s, {seed_tag::kShuffle});
    if (net)
        net->init_seed = derive_seed(s, {seed_tag::kInit});
}

NetSpec PipelineConfig::net_spec() const
{
    if (net)
        return *net;
    const Shape input{dataset.image_height, dataset.image_width,
                      dataset.palette == Palette::Grayscale ? std::size_t{1} : std::size_t{3}};
    return NetSpec::default_net(dataset.schemes.size(), input,
                                derive_seed(seed.value_or(0), {seed_tag::kInit}));
}

void PipelineConfig::validate() const
{
    dataset.validate();
    train.validate();
    Network probe(net_spec());
    (void)probe;
}

json PipelineConfig::to_json() const
{
    json j{{"dataset", dataset}, {"train", train}, {"output_dir", output_dir.string()}};
    j["seed"] = seed ? json(*seed) : json(nullptr);
    j["net"] = net ? json(*net) : json(nullptr);
    return j;
}

PipelineConfig PipelineConfig::from_json(const json& j)
{
    require_object(j, "config");
    static const char* kKeys[] = {"seed", "dataset", "train", "net", "output_dir"};
    for (const auto& [key, _] : j.items())
        if (std::find_if(std::begin(kKeys), std::end(kKeys),
                         [&](const char* k) { return key == k; }) == std::end(kKeys))
            throw ParameterError("unknown config key '" + key + "'");

    PipelineConfig cfg;
    try {
        // Seed first, so explicitly written sub-seeds take precedence.
        if (auto it = j.find("seed"); it != j.end() && !it->is_null())
            cfg.apply_seed(it->get<std::uint64_t>());
        if (auto it = j.find("dataset"); it != j.end())
            amc::from_json(*it, cfg.dataset);
        if (auto it = j.find("train"); it != j.end())
            amc::from_json(*it, cfg.train);
        if (auto it = j.find("net"); it != j.end() && !it->is_null()) {
            NetSpec n;
            if (cfg.seed)
                n.init_seed = derive_seed(*cfg.seed, {seed_tag::kInit});
            amc::from_json(*it, n);
            cfg.net = n;
        }
        if (auto it = j.find("output_dir"); it != j.end())
            cfg.output_dir = it->get<std::string>();
    } catch (const json::exception& e) {
        throw ParameterError(std::string("config: ") + e.what());
    }
    return cfg;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config " + path.string());
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::exception& e) {
        throw ParameterError(path.string() + ": " + e.what());
    }
    return from_json(j);
}

void PipelineConfig::save(const std::filesystem::path& path) const
{
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw IoError("cannot create " + path.string());
    out << to_json().dump(2) << '\n';
    if (!out)
        throw IoError("write failed: " + path.string());
}

} // namespace amc
