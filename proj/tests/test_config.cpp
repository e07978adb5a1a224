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

#include <cmath>
#include <fstream>

#include "amc/config.hpp"
#include "amc/error.hpp"
#include "amc/seed.hpp"
#include "support.hpp"

using namespace amc;
using nlohmann::json;

TEST_CASE("pipeline config round trip")
{
    PipelineConfig cfg;
    cfg.apply_seed(17);
    cfg.dataset.schemes = {Modulation::QAM16, Modulation::AMSSB};
    cfg.dataset.samples_per_class = 12;
    cfg.dataset.snr_list_db = {0, 18};
    cfg.dataset.layout = SnrLayout::Mixed;
    cfg.dataset.palette = Palette::Colormapped;
    cfg.dataset.channel.fading->k_factor = std::numeric_limits<double>::infinity();
    cfg.train.max_epochs = 7;
    cfg.train.initial_lr = 5e-4;
    cfg.net = NetSpec::default_net(2, {32, 32, 3}, 4);
    cfg.output_dir = "somewhere";

    const auto back = PipelineConfig::from_json(json::parse(cfg.to_json().dump()));
    CHECK(back.seed == cfg.seed);
    CHECK(back.dataset.schemes == cfg.dataset.schemes);
    CHECK(back.dataset.samples_per_class == 12);
    CHECK(back.dataset.snr_list_db == cfg.dataset.snr_list_db);
    CHECK(back.dataset.layout == SnrLayout::Mixed);
    CHECK(back.dataset.palette == Palette::Colormapped);
    CHECK(back.dataset.channel == cfg.dataset.channel);
    CHECK(std::isinf(back.dataset.channel.fading->k_factor));
    CHECK(back.dataset.spectrogram == cfg.dataset.spectrogram);
    CHECK(back.dataset.frame.master_seed == cfg.dataset.frame.master_seed);
    CHECK(back.train == cfg.train);
    CHECK(back.net == cfg.net);
    CHECK(back.output_dir == cfg.output_dir);
    CHECK(back.to_json() == cfg.to_json());

    amc::test::TempDir dir("cfg");
    cfg.save(dir / "c.json");
    CHECK(PipelineConfig::load(dir / "c.json").to_json() == cfg.to_json());
}

TEST_CASE("seed propagation")
{
    PipelineConfig cfg;
    cfg.apply_seed(5);
    CHECK(cfg.seed == 5u);
    CHECK(cfg.dataset.frame.master_seed == 5u);
    CHECK(cfg.dataset.split_seed == derive_seed(5, {seed_tag::kSplit}));
    CHECK(cfg.train.seed == derive_seed(5, {seed_tag::kShuffle}));
    CHECK(cfg.net_spec().init_seed == derive_seed(5, {seed_tag::kInit}));
    CHECK(cfg.net_spec().input == Shape{64, 64, 1});

    const auto j = PipelineConfig::from_json(json{{"seed", 9}});
    CHECK(j.dataset.frame.master_seed == 9u);
    CHECK(j.train.seed == derive_seed(9, {seed_tag::kShuffle}));
}

TEST_CASE("partial documents keep defaults")
{
    const auto cfg = PipelineConfig::from_json(json::parse(R"({
        "dataset": {"schemes": ["BPSK", "gfsk"], "spectrogram": {"preset": "highres", "db_floor": -90},
                    "channel": {"fading": null}},
        "train": {"batch_size": 16}
    })"));
    CHECK(cfg.dataset.schemes == std::vector<Modulation>{Modulation::BPSK, Modulation::GFSK});
    CHECK(cfg.dataset.samples_per_class == DatasetConfig{}.samples_per_class);
    CHECK(cfg.dataset.spectrogram.window_len == 4096);
    CHECK(cfg.dataset.spectrogram.db_floor == -90.0);
    CHECK_FALSE(cfg.dataset.channel.fading.has_value());
    CHECK(cfg.train.batch_size == 16);
    CHECK(cfg.train.max_epochs == TrainConfig{}.max_epochs);
    CHECK_FALSE(cfg.seed.has_value());
    CHECK_FALSE(cfg.net.has_value());

    const auto all = PipelineConfig::from_json(json::parse(R"({"dataset": {"schemes": "all",
                                                                "spectrogram": "transformed"}})"));
    CHECK(all.dataset.schemes.size() == 11);
    CHECK(all.dataset.spectrogram == SpectrogramConfig::transformed());
}

TEST_CASE("presets")
{
    CHECK(spectrogram_preset("transformed") == SpectrogramConfig::transformed());
    const auto hi = spectrogram_preset("highres");
    CHECK(hi.window_len == 4096);
    CHECK(hi.overlap == 3584);
    CHECK(hi.nfft == 8192);
    const auto lo = SpectrogramConfig::transformed();
    CHECK(lo.window_len == 8);
    CHECK(lo.overlap == 4);
    CHECK(lo.nfft == 32);
    CHECK(lo.kaiser_beta == 8.0);
    CHECK_THROWS_AS(spectrogram_preset("medium"), ParameterError);
}

TEST_CASE("bad documents are rejected")
{
    CHECK_THROWS_AS(PipelineConfig::from_json(json{{"sed", 1}}), ParameterError);
    CHECK_THROWS_AS(PipelineConfig::from_json(json::array()), ParameterError);
    CHECK_THROWS_AS(PipelineConfig::from_json(json{{"train", {{"batch_size", "big"}}}}),
                    ParameterError);
    CHECK_THROWS_AS(PipelineConfig::from_json(json{{"dataset", {{"schemes", {"OFDM"}}}}}),
                    UnsupportedSchemeError);
    CHECK_THROWS_AS(
        PipelineConfig::from_json(json{{"dataset", {{"channel", {{"fading", {{"k_factor", "big"}}}}}}}}),
        ParameterError);

    amc::test::TempDir dir("cfgbad");
    {
        std::ofstream out(dir / "c.json");
        out << "{ \"seed\": 3, // comment\n \"train\": { }";
    }
    CHECK_THROWS_AS(PipelineConfig::load(dir / "c.json"), ParameterError);
    {
        std::ofstream out(dir / "ok.json");
        out << "{ \"seed\": 3, // comments are allowed\n \"train\": { } }";
    }
    CHECK(PipelineConfig::load(dir / "ok.json").seed == 3u);
    CHECK_THROWS_AS(PipelineConfig::load(dir / "none.json"), IoError);
}

TEST_CASE("pipeline validation")
{
    PipelineConfig cfg;
    cfg.apply_seed(1);
    CHECK_NOTHROW(cfg.validate());
    cfg.dataset.image_height = 4;
    cfg.dataset.image_width = 4;
    CHECK_THROWS_AS(cfg.validate(), ShapeError);
    cfg = PipelineConfig{};
    cfg.train.max_epochs = 0;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
}
