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

#include "amc/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "amc/config.hpp"
#include "amc/digest.hpp"
#include "amc/error.hpp"
#include "amc/image.hpp"
#include "amc/seed.hpp"

namespace amc {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(SnrLayout l) noexcept
{
    return l == SnrLayout::PerSnr ? "per_snr" : "mixed";
}

SnrLayout parse_snr_layout(std::string_view s)
{
    if (s == "per_snr" || s == "per-snr")
        return SnrLayout::PerSnr;
    if (s == "mixed")
        return SnrLayout::Mixed;
    throw ParameterError("unknown SNR layout '" + std::string(s) + "'");
}

void DatasetConfig::validate() const
{
    if (schemes.empty())
        throw ParameterError("dataset: no schemes selected");
    if (std::set<Modulation>(schemes.begin(), schemes.end()).size() != schemes.size())
        throw ParameterError("dataset: duplicate scheme");
    if (samples_per_class < 1)
        throw ParameterError("dataset: samples_per_class must be >= 1");
    if (snr_list_db.empty())
        throw ParameterError("dataset: snr_list_db must not be empty");
    if (std::set<int>(snr_list_db.begin(), snr_list_db.end()).size() != snr_list_db.size())
        throw ParameterError("dataset: duplicate SNR");
    frame.validate();
    spectrogram.validate();
    (void)spectrogram_length(frame.frame_length, spectrogram.window_len, spectrogram.overlap);
    if (image_height == 0 || image_width == 0)
        throw ParameterError("dataset: image size must be positive");
    if (channel.cfo_max_hz < 0 || channel.cfo_max_hz >= frame.sample_rate_hz / 2)
        throw ParameterError("dataset: cfo_max_hz must lie in [0, fs/2)");
    if (channel.sro_max_ppm < 0 || channel.sro_max_ppm > kMaxSroPpm)
        throw ParameterError("dataset: sro_max_ppm out of range");
    if (channel.fading)
        channel.fading->validate(frame.frame_length);
    if (folds == 1)
        throw ParameterError("dataset: folds must be 0 (no split) or >= 2");
}

std::size_t DatasetConfig::expected_entries() const
{
    const std::size_t per_scheme =
        layout == SnrLayout::PerSnr ? samples_per_class * snr_list_db.size() : samples_per_class;
    return schemes.size() * per_scheme;
}

std::size_t DatasetManifest::label_of(Modulation m) const
{
    const auto it = std::find(schemes.begin(), schemes.end(), m);
    if (it == schemes.end())
        throw ParameterError("scheme " + std::string(name(m)) + " is not in the manifest");
    return static_cast<std::size_t>(it - schemes.begin());
}

std::vector<std::string> DatasetManifest::class_names() const
{
    std::vector<std::string> out;
    for (auto m : schemes)
        out.emplace_back(name(m));
    return out;
}

json DatasetManifest::to_json() const
{
    std::map<std::string, std::map<std::string, std::size_t>> counts;
    for (const auto& e : entries)
        ++counts[std::string(name(e.scheme))][std::to_string(e.snr_db)];
    json totals = json::object();
    for (const auto& [scheme, per_snr] : counts)
        totals[scheme] = per_snr;

    json list = json::array();
    for (const auto& e : entries)
        list.push_back({{"path", e.path},
                        {"scheme", std::string(name(e.scheme))},
                        {"scheme_index", class_index(e.scheme)},
                        {"snr_db", e.snr_db},
                        {"frame_seed", e.frame_seed},
                        {"fold", e.fold},
                        {"sha256", e.sha256}});

    std::vector<std::string> names = class_names();
    return json{{"format", "amc-dataset-manifest"},
                {"version", kVersion},
                {"config", config},
                {"schemes", names},
                {"folds", folds},
                {"split_seed", split_seed},
                {"entry_count", entries.size()},
                {"totals", totals},
                {"entries", list}};
}

DatasetManifest DatasetManifest::from_json(const json& j)
{
    try {
        if (j.value("format", "") != "amc-dataset-manifest")
            throw FormatError("not a dataset manifest");
        if (j.at("version").get<int>() != kVersion)
            throw FormatError("unsupported manifest version");
        DatasetManifest m;
        m.config = j.value("config", json::object());
        for (const auto& s : j.at("schemes"))
            m.schemes.push_back(parse_modulation(s.get<std::string>()));
        m.folds = j.at("folds").get<std::size_t>();
        m.split_seed = j.at("split_seed").get<std::uint64_t>();
        for (const auto& e : j.at("entries")) {
            ManifestEntry me;
            me.path = e.at("path").get<std::string>();
            me.scheme = parse_modulation(e.at("scheme").get<std::string>());
            me.snr_db = e.at("snr_db").get<int>();
            me.frame_seed = e.at("frame_seed").get<std::uint64_t>();
            me.fold = e.at("fold").get<int>();
            me.sha256 = e.at("sha256").get<std::string>();
            (void)m.label_of(me.scheme);
            if (me.fold >= static_cast<int>(m.folds))
                throw FormatError("fold index out of range in " + me.path);
            m.entries.push_back(std::move(me));
        }
        if (j.contains("entry_count") && j["entry_count"].get<std::size_t>() != m.entries.size())
            throw FormatError("entry_count does not match the entry list");
        return m;
    } catch (const json::exception& e) {
        throw FormatError(std::string("manifest: ") + e.what());
    } catch (const UnsupportedSchemeError& e) {
        throw FormatError(std::string("manifest: ") + e.what());
    } catch (const ParameterError& e) {
        throw FormatError(std::string("manifest: ") + e.what());
    }
}

void DatasetManifest::save(const fs::path& path) const
{
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot create " + tmp.string());
        out << to_json().dump(1) << '\n';
        out.flush();
        if (!out)
            throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec)
        throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                      ec.message());
}

DatasetManifest DatasetManifest::load(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open manifest " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    return from_json(j);
}

std::string entry_path(Modulation m, int snr_db, std::uint64_t frame_seed)
{
    char seed_hex[17];
    std::snprintf(seed_hex, sizeof(seed_hex), "%016llx",
                  static_cast<unsigned long long>(frame_seed));
    return "snr_" + std::to_string(snr_db) + "/" + std::string(name(m)) + "/" + seed_hex + ".png";
}

Image render_sample(const DatasetConfig& cfg, const StftEngine& engine, Modulation m, int snr_db,
                    std::uint64_t seed)
{
    const IQFrame clean = synthesize_frame_from_seed(m, cfg.frame, seed);
    const ChannelConfig ch = draw_channel(cfg.channel, static_cast<double>(snr_db),
                                          derive_seed(seed, {seed_tag::kChannel}));
    const IQFrame rx = apply_channel(clean, ch);
    return render_image(engine.compute(rx), cfg.image_height, cfg.image_width, cfg.palette);
}

namespace {

struct Job {
    Modulation scheme;
    int snr_db;
    std::uint64_t seed;
};

std::vector<Job> plan_jobs(const DatasetConfig& cfg)
{
    std::vector<Job> jobs;
    jobs.reserve(cfg.expected_entries());
    const std::size_t n_snr = cfg.snr_list_db.size();
    for (auto m : cfg.schemes) {
        if (cfg.layout == SnrLayout::PerSnr) {
            for (std::size_t s = 0; s < n_snr; ++s)
                for (std::size_t i = 0; i < cfg.samples_per_class; ++i)
                    jobs.push_back({m, cfg.snr_list_db[s],
                                    frame_seed(cfg.frame.master_seed, m,
                                               s * cfg.samples_per_class + i)});
        } else {
            for (std::size_t i = 0; i < cfg.samples_per_class; ++i)
                jobs.push_back({m, cfg.snr_list_db[i % n_snr],
                                frame_seed(cfg.frame.master_seed, m, i)});
        }
    }
    return jobs;
}

} // namespace

DatasetManifest build_dataset(const DatasetConfig& cfg, const fs::path& root, std::size_t jobs)
{
    cfg.validate();
    if (jobs == 0)
        throw ParameterError("jobs must be >= 1");

    const std::vector<Job> plan = plan_jobs(cfg);
    std::set<fs::path> dirs;
    for (const auto& j : plan)
        dirs.insert(root / fs::path(entry_path(j.scheme, j.snr_db, j.seed)).parent_path());
    for (const auto& d : dirs) {
        std::error_code ec;
        fs::create_directories(d, ec);
        if (ec)
            throw IoError("cannot create " + d.string() + ": " + ec.message());
    }

    const StftEngine engine(cfg.spectrogram);
    std::vector<ManifestEntry> entries(plan.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> written{0};
    std::atomic<bool> failed{false};
    std::mutex err_mu;
    std::string first_error;

    auto worker = [&] {
        for (;;) {
            if (failed.load())
                return;
            const std::size_t i = next.fetch_add(1);
            if (i >= plan.size())
                return;
            const Job& job = plan[i];
            ManifestEntry& e = entries[i];
            e.path = entry_path(job.scheme, job.snr_db, job.seed);
            e.scheme = job.scheme;
            e.snr_db = job.snr_db;
            e.frame_seed = job.seed;
            try {
                const auto png = encode_png(render_sample(cfg, engine, job.scheme, job.snr_db,
                                                          job.seed));
                e.sha256 = sha256_hex(png);
                write_file(root / e.path, png);
                written.fetch_add(1);
            } catch (const std::exception& ex) {
                std::lock_guard lock(err_mu);
                if (!failed.exchange(true))
                    first_error = e.path + ": " + ex.what();
                return;
            }
        }
    };

    const std::size_t n_threads = std::min(jobs, std::max<std::size_t>(plan.size(), 1));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < n_threads; ++t)
            pool.emplace_back(worker);
    }

    if (failed) {
        throw IoError("dataset build aborted after " + std::to_string(written.load()) + " of " +
                      std::to_string(plan.size()) + " images were written under " +
                      root.string() + "; no manifest was written; first failure: " +
                      first_error);
    }

    DatasetManifest manifest;
    manifest.config = cfg;
    manifest.schemes = cfg.schemes;
    manifest.entries = std::move(entries);
    if (cfg.folds >= 2)
        manifest = kfold_split(std::move(manifest), cfg.folds, cfg.split_seed);
    manifest.save(root / kManifestName);
    return manifest;
}

DatasetManifest kfold_split(DatasetManifest manifest, std::size_t k, std::uint64_t seed)
{
    if (k < 2)
        throw StratificationError("k must be >= 2");
    if (manifest.entries.empty())
        throw StratificationError("manifest has no entries");

    std::map<std::pair<std::size_t, int>, std::vector<std::size_t>> cells;
    for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
        const auto& e = manifest.entries[i];
        cells[{manifest.label_of(e.scheme), e.snr_db}].push_back(i);
    }
    for (const auto& [key, members] : cells) {
        if (members.size() < k)
            throw StratificationError(
                "cell (" + manifest.class_names()[key.first] + ", " +
                std::to_string(key.second) + " dB) has " + std::to_string(members.size()) +
                " entries, fewer than k=" + std::to_string(k));
    }

    // Each class continues dealing where its previous cell stopped, so the
    // per-class fold totals stay within one of each other as well.
    std::vector<std::size_t> class_offset(manifest.schemes.size(), 0);
    for (auto& [key, members] : cells) {
        Rng rng(derive_seed(seed, {seed_tag::kSplit, key.first,
                                   static_cast<std::uint64_t>(static_cast<std::int64_t>(key.second))}));
        std::shuffle(members.begin(), members.end(), rng);
        std::size_t& off = class_offset[key.first];
        for (std::size_t j = 0; j < members.size(); ++j)
            manifest.entries[members[j]].fold = static_cast<int>((off + j) % k);
        off = (off + members.size()) % k;
    }
    manifest.folds = k;
    manifest.split_seed = seed;
    return manifest;
}

void verify_manifest(const DatasetManifest& manifest, const fs::path& root)
{
    for (const auto& e : manifest.entries) {
        const fs::path p = root / e.path;
        if (!fs::exists(p))
            throw IntegrityError("missing file " + p.string());
        if (sha256_file(p) != e.sha256)
            throw IntegrityError("digest mismatch for " + p.string());
    }
}

namespace {

LabeledImage decode_entry(const DatasetManifest& manifest, const ManifestEntry& e,
                          const fs::path& root, Shape& shape)
{
    const fs::path p = root / e.path;
    std::vector<std::uint8_t> bytes;
    try {
        bytes = read_file(p);
    } catch (const IoError&) {
        throw IntegrityError("missing file " + p.string());
    }
    if (sha256_hex(bytes) != e.sha256)
        throw IntegrityError("digest mismatch for " + p.string());
    const Image img = decode_png(bytes);
    const Shape s{img.height, img.width, img.channels};
    if (shape.size() == 0)
        shape = s;
    else if (!(shape == s))
        throw FormatError(p.string() + ": image shape " + to_string(s) + " differs from " +
                          to_string(shape));
    LabeledImage out;
    out.label = manifest.label_of(e.scheme);
    out.snr_db = e.snr_db;
    out.pixels.resize(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        out.pixels[i] = img.pixels[i] / 255.0;
    return out;
}

} // namespace

Split load_split(const DatasetManifest& manifest, const fs::path& root, std::size_t test_fold,
                 std::optional<int> snr_db)
{
    if (manifest.folds < 2)
        throw ParameterError("manifest has no fold assignment");
    if (test_fold >= manifest.folds)
        throw ParameterError("test fold " + std::to_string(test_fold) + " outside 0.." +
                             std::to_string(manifest.folds - 1));
    Split split;
    split.train.class_names = split.test.class_names = manifest.class_names();
    Shape shape{};
    for (const auto& e : manifest.entries) {
        if (snr_db && e.snr_db != *snr_db)
            continue;
        if (e.fold < 0)
            throw ParameterError("entry without a fold: " + e.path);
        auto item = decode_entry(manifest, e, root, shape);
        (static_cast<std::size_t>(e.fold) == test_fold ? split.test : split.train)
            .items.push_back(std::move(item));
    }
    split.train.shape = split.test.shape = shape;
    return split;
}

ImageSet load_all(const DatasetManifest& manifest, const fs::path& root, std::optional<int> snr_db)
{
    ImageSet set;
    set.class_names = manifest.class_names();
    Shape shape{};
    for (const auto& e : manifest.entries) {
        if (snr_db && e.snr_db != *snr_db)
            continue;
        set.items.push_back(decode_entry(manifest, e, root, shape));
    }
    set.shape = shape;
    return set;
}

} // namespace amc
