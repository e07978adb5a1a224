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

#ifndef AMC_DATASET_HPP_
#define AMC_DATASET_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "amc/channel.hpp"
#include "amc/stft.hpp"
#include "amc/tensor.hpp"
#include "amc/wavegen.hpp"

namespace amc {

enum class SnrLayout {
    /** samples_per_class frames per scheme at every listed SNR. */
    PerSnr,
    /** samples_per_class frames per scheme in total, SNRs dealt round-robin. */
    Mixed,
};

std::string_view to_string(SnrLayout l) noexcept;
SnrLayout parse_snr_layout(std::string_view s);

struct DatasetConfig {
    std::vector<Modulation> schemes{kAllModulations.begin(), kAllModulations.end()};
    std::size_t samples_per_class = 1940;
    std::vector<int> snr_list_db{5, 10, 15, 20, 25, 30};
    SnrLayout layout = SnrLayout::PerSnr;
    FrameSpec frame;
    ImpairmentRanges channel;
    SpectrogramConfig spectrogram = SpectrogramConfig::transformed();
    std::size_t image_height = 64;
    std::size_t image_width = 64;
    Palette palette = Palette::Grayscale;
    /** 0 leaves entries unassigned (fold -1); otherwise at least 2. */
    std::size_t folds = 5;
    std::uint64_t split_seed = 0;

    void validate() const;
    /** Number of manifest entries the layout produces. */
    std::size_t expected_entries() const;
};

struct ManifestEntry {
    std::string path;  // relative to the dataset root, '/' separated
    Modulation scheme = Modulation::BPSK;
    int snr_db = 0;
    std::uint64_t frame_seed = 0;
    int fold = -1;
    std::string sha256;

    bool operator==(const ManifestEntry&) const = default;
};

struct DatasetManifest {
    static constexpr int kVersion = 1;

    nlohmann::json config;  // echo of the DatasetConfig that produced it
    std::vector<Modulation> schemes;
    std::size_t folds = 0;
    std::uint64_t split_seed = 0;
    std::vector<ManifestEntry> entries;

    /** @brief Label (0..K-1) of a scheme within this manifest. */
    std::size_t label_of(Modulation m) const;
    std::vector<std::string> class_names() const;

    nlohmann::json to_json() const;
    static DatasetManifest from_json(const nlohmann::json& j);

    /** @brief Canonical text; written atomically (temp file + rename). */
    void save(const std::filesystem::path& path) const;
    static DatasetManifest load(const std::filesystem::path& path);
};

inline constexpr const char* kManifestName = "manifest.json";

/** @brief Relative path of an entry: snr_<db>/<scheme>/<frame_seed hex>.png */
std::string entry_path(Modulation m, int snr_db, std::uint64_t frame_seed);

/** @brief One pipeline step: clean frame, channel, spectrogram, rendered image. */
Image render_sample(const DatasetConfig& cfg, const StftEngine& engine, Modulation m,
                    int snr_db, std::uint64_t frame_seed);

/** @brief Build, write images under root, split into cfg.folds folds, write the manifest.
 *
 * On a write failure no manifest is written; the IoError message reports how
 * many images were written before the abort and the first failing path.
 *
 * Output is byte-identical for any jobs >= 1.
 */
DatasetManifest build_dataset(const DatasetConfig& cfg, const std::filesystem::path& root,
                              std::size_t jobs = 1);

/** @brief Stratified assignment of folds 0..k-1 within each (scheme, snr) cell. */
DatasetManifest kfold_split(DatasetManifest manifest, std::size_t k, std::uint64_t seed);

/** @brief Re-hash every entry; throws IntegrityError naming the first bad file. */
void verify_manifest(const DatasetManifest& manifest, const std::filesystem::path& root);

struct Split {
    ImageSet train;
    ImageSet test;
};

/** @brief Decode a fold split. Entries are filtered by snr_db when given. */
Split load_split(const DatasetManifest& manifest, const std::filesystem::path& root,
                 std::size_t test_fold, std::optional<int> snr_db = std::nullopt);

/** @brief Decode every (optionally SNR-filtered) entry regardless of fold. */
ImageSet load_all(const DatasetManifest& manifest, const std::filesystem::path& root,
                  std::optional<int> snr_db = std::nullopt);

} // namespace amc

#endif /* AMC_DATASET_HPP_ */
