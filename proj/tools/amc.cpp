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

// amc: command-line front end for the modulation-classification pipeline.
//
// Exit status: 0 success, 1 runtime failure, 2 usage error or missing
// prerequisite, 3 integrity failure. Errors are reported on stderr as a
// single line:  error: kind=<kind> msg="<text>"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "amc/bench.hpp"
#include "amc/channel.hpp"
#include "amc/checkpoint.hpp"
#include "amc/config.hpp"
#include "amc/dataset.hpp"
#include "amc/error.hpp"
#include "amc/evaluate.hpp"
#include "amc/image.hpp"
#include "amc/iq_archive.hpp"
#include "amc/seed.hpp"
#include "amc/stft.hpp"
#include "amc/train.hpp"
#include "amc/wavegen.hpp"

namespace fs = std::filesystem;
using namespace amc;

namespace {

class UsageError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "usage"; }
};

int exit_code_for(const std::string& kind)
{
    if (kind == "usage")
        return 2;
    if (kind == "integrity")
        return 3;
    return 1;
}

void report_error(const std::string& kind, std::string msg)
{
    for (auto& c : msg)
        if (c == '"')
            c = '\'';
        else if (c == '\n' || c == '\r')
            c = ' ';
    std::cerr << "error: kind=" << kind << " msg=\"" << msg << "\"\n";
}

struct Globals {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::size_t jobs = 1;
    std::string out;
    bool print_config = false;
};

PipelineConfig resolve_config(const Globals& g)
{
    PipelineConfig cfg;
    if (!g.config_path.empty()) {
        if (!fs::exists(g.config_path))
            throw UsageError("config file not found: " + g.config_path);
        cfg = PipelineConfig::load(g.config_path);
    }
    if (g.seed)
        cfg.apply_seed(*g.seed);
    if (!g.out.empty())
        cfg.output_dir = g.out;
    if (!cfg.seed)
        throw UsageError("a seed is required: pass --seed or set \"seed\" in the config");
    if (g.jobs == 0)
        throw UsageError("--jobs must be >= 1");
    return cfg;
}

void ensure_dir(const fs::path& p)
{
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec)
        throw IoError("cannot create " + p.string() + ": " + ec.message());
}

template <typename Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn fn)
{
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::exception_ptr first;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n)
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!first)
                    first = std::current_exception();
                next = n;
                return;
            }
        }
    };
    const std::size_t threads = std::max<std::size_t>(1, std::min(jobs, n));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }
    if (first)
        std::rethrow_exception(first);
}

std::vector<Modulation> parse_schemes(const std::vector<std::string>& names)
{
    std::vector<Modulation> out;
    for (const auto& n : names) {
        if (n == "all")
            return {kAllModulations.begin(), kAllModulations.end()};
        out.push_back(parse_modulation(n));
    }
    return out;
}

fs::path default_manifest(const PipelineConfig& cfg)
{
    return cfg.output_dir / "dataset" / kManifestName;
}

DatasetManifest load_manifest_or_usage(const fs::path& path)
{
    if (!fs::exists(path))
        throw UsageError("manifest not found: " + path.string() + " (run 'amc dataset' first)");
    return DatasetManifest::load(path);
}

// ---------------------------------------------------------------- synth

struct SynthOpts {
    std::vector<std::string> schemes{"all"};
    std::size_t count = 10;
    std::optional<double> snr_db;
    std::optional<std::size_t> length;
    std::string file;
};

std::vector<IQFrame> synth_frames(const PipelineConfig& cfg, const std::vector<Modulation>& schemes,
                                  std::size_t count, std::optional<double> snr_db,
                                  std::size_t jobs)
{
    std::vector<IQFrame> frames(schemes.size() * count);
    parallel_for(frames.size(), jobs, [&](std::size_t i) {
        const Modulation m = schemes[i / count];
        IQFrame f = synthesize_clean_frame(m, cfg.dataset.frame, i % count);
        if (snr_db) {
            const auto ch = draw_channel(cfg.dataset.channel, *snr_db,
                                         derive_seed(f.frame_seed, {seed_tag::kChannel}));
            f = apply_channel(f, ch);
        }
        frames[i] = std::move(f);
    });
    return frames;
}

int cmd_synth(const Globals& g, const SynthOpts& o)
{
    PipelineConfig cfg = resolve_config(g);
    if (o.length)
        cfg.dataset.frame.frame_length = *o.length;
    if (o.count == 0)
        throw UsageError("--count must be >= 1");
    const auto schemes = parse_schemes(o.schemes);
    const auto frames = synth_frames(cfg, schemes, o.count, o.snr_db, g.jobs);

    const fs::path file = o.file.empty() ? cfg.output_dir / "frames.iqf" : fs::path(o.file);
    if (file.has_parent_path())
        ensure_dir(file.parent_path());
    write_iq_archive(file, frames);

    std::printf("%-8s %6s %12s %12s %12s\n", "scheme", "frames", "mean_power", "min_power",
                "max_power");
    for (std::size_t s = 0; s < schemes.size(); ++s) {
        double sum = 0.0, lo = 1e300, hi = -1e300;
        for (std::size_t i = 0; i < o.count; ++i) {
            const double p = mean_power(frames[s * o.count + i].samples);
            sum += p;
            lo = std::min(lo, p);
            hi = std::max(hi, p);
        }
        std::printf("%-8s %6zu %12.6f %12.6f %12.6f\n", std::string(name(schemes[s])).c_str(),
                    o.count, sum / static_cast<double>(o.count), lo, hi);
    }
    std::printf("wrote %zu frames of %zu samples to %s\n", frames.size(),
                cfg.dataset.frame.frame_length, file.string().c_str());
    return 0;
}

// ---------------------------------------------------------- spectrogram

struct SpectrogramOpts {
    std::string input;
    std::vector<std::string> schemes{"all"};
    std::size_t count = 1;
    std::optional<double> snr_db;
    std::optional<std::size_t> length;
    std::string preset;
    std::string palette;
    std::optional<std::size_t> height;
    std::optional<std::size_t> width;
    bool raw = false;
};

int cmd_spectrogram(const Globals& g, const SpectrogramOpts& o)
{
    PipelineConfig cfg = resolve_config(g);
    if (o.length)
        cfg.dataset.frame.frame_length = *o.length;
    SpectrogramConfig sc = o.preset.empty() ? cfg.dataset.spectrogram : spectrogram_preset(o.preset);
    const Palette palette = o.palette.empty() ? cfg.dataset.palette : parse_palette(o.palette);
    const std::size_t h = o.height.value_or(cfg.dataset.image_height);
    const std::size_t w = o.width.value_or(cfg.dataset.image_width);

    std::vector<IQFrame> frames;
    if (!o.input.empty()) {
        if (!fs::exists(o.input))
            throw UsageError("input archive not found: " + o.input);
        frames = ingest_iq_archive(o.input);
    } else {
        frames = synth_frames(cfg, parse_schemes(o.schemes), o.count, o.snr_db, g.jobs);
    }

    const fs::path dir = cfg.output_dir / "spectrograms";
    ensure_dir(dir);
    const StftEngine engine(sc);
    std::vector<std::string> lines(frames.size());
    parallel_for(frames.size(), g.jobs, [&](std::size_t i) {
        const auto& f = frames[i];
        char stem[64];
        std::snprintf(stem, sizeof(stem), "%05zu_%s", i, std::string(name(f.scheme)).c_str());
        const Spectrogram spec = engine.compute(f);
        write_png(dir / (std::string(stem) + ".png"), render_image(spec, h, w, palette));
        if (o.raw)
            write_raw_spectrogram(dir / (std::string(stem) + ".f32"), spec, sc);
        char line[160];
        std::snprintf(line, sizeof(line), "%s  %zu x %zu  dt=%.3g s", stem, spec.n_frames,
                      spec.n_bins, spec.delta_t);
        lines[i] = line;
    });
    for (const auto& l : lines)
        std::printf("%s\n", l.c_str());
    std::printf("wrote %zu spectrogram images to %s\n", frames.size(), dir.string().c_str());
    return 0;
}

// -------------------------------------------------------------- dataset

struct DatasetOpts {
    std::vector<std::string> schemes;
    std::optional<std::size_t> samples;
    std::vector<int> snr;
    std::string layout;
    std::optional<std::size_t> folds;
    std::string palette;
    std::optional<std::size_t> size;
};

void apply_dataset_overrides(PipelineConfig& cfg, const DatasetOpts& o)
{
    auto& d = cfg.dataset;
    if (!o.schemes.empty())
        d.schemes = parse_schemes(o.schemes);
    if (o.samples)
        d.samples_per_class = *o.samples;
    if (!o.snr.empty())
        d.snr_list_db = o.snr;
    if (!o.layout.empty())
        d.layout = parse_snr_layout(o.layout);
    if (o.folds)
        d.folds = *o.folds;
    if (!o.palette.empty())
        d.palette = parse_palette(o.palette);
    if (o.size)
        d.image_height = d.image_width = *o.size;
}

int cmd_dataset(const Globals& g, const DatasetOpts& o)
{
    PipelineConfig cfg = resolve_config(g);
    apply_dataset_overrides(cfg, o);
    cfg.dataset.validate();
    const fs::path root = cfg.output_dir / "dataset";
    ensure_dir(root);
    cfg.save(cfg.output_dir / "config.json");

    const auto manifest = build_dataset(cfg.dataset, root, g.jobs);

    std::map<std::pair<std::string, int>, std::size_t> totals;
    for (const auto& e : manifest.entries)
        ++totals[{std::string(name(e.scheme)), e.snr_db}];
    std::printf("%-8s %7s %7s\n", "scheme", "snr_db", "images");
    for (const auto& [key, n] : totals)
        std::printf("%-8s %7d %7zu\n", key.first.c_str(), key.second, n);
    std::printf("wrote %zu entries, %zu folds, manifest %s\n", manifest.entries.size(),
                manifest.folds, (root / kManifestName).string().c_str());
    return 0;
}

// ---------------------------------------------------------------- split

struct SplitOpts {
    std::string manifest;
    std::optional<std::size_t> k;
    std::optional<std::uint64_t> split_seed;
};

int cmd_split(const Globals& g, const SplitOpts& o)
{
    const PipelineConfig cfg = resolve_config(g);
    const fs::path path = o.manifest.empty() ? default_manifest(cfg) : fs::path(o.manifest);
    auto manifest = load_manifest_or_usage(path);
    verify_manifest(manifest, path.parent_path());

    const std::size_t k = o.k.value_or(manifest.folds ? manifest.folds : cfg.dataset.folds);
    const std::uint64_t seed = o.split_seed.value_or(cfg.dataset.split_seed);
    manifest = kfold_split(std::move(manifest), k, seed);
    manifest.save(path);

    const auto names = manifest.class_names();
    std::vector<std::vector<std::size_t>> counts(names.size(), std::vector<std::size_t>(k, 0));
    for (const auto& e : manifest.entries)
        ++counts[manifest.label_of(e.scheme)][static_cast<std::size_t>(e.fold)];
    std::printf("%-8s", "class");
    for (std::size_t f = 0; f < k; ++f)
        std::printf(" fold%-3zu", f);
    std::printf("\n");
    for (std::size_t c = 0; c < names.size(); ++c) {
        std::printf("%-8s", names[c].c_str());
        for (std::size_t f = 0; f < k; ++f)
            std::printf(" %7zu", counts[c][f]);
        std::printf("\n");
    }
    std::printf("split %zu entries into %zu folds (seed %llu), manifest %s\n",
                manifest.entries.size(), k, static_cast<unsigned long long>(seed),
                path.string().c_str());
    return 0;
}

// ---------------------------------------------------------------- train

struct TrainOpts {
    std::string manifest;
    std::size_t fold = 0;
    bool kfold = false;
    std::optional<int> snr;
    std::optional<std::size_t> epochs;
    std::optional<double> lr;
    std::optional<std::size_t> batch;
    std::optional<std::size_t> patience;
    std::optional<std::size_t> drop_period;
    bool quiet = false;
};

int cmd_train(const Globals& g, const TrainOpts& o)
{
    PipelineConfig cfg = resolve_config(g);
    auto& tc = cfg.train;
    if (o.epochs)
        tc.max_epochs = *o.epochs;
    if (o.lr)
        tc.initial_lr = *o.lr;
    if (o.batch)
        tc.batch_size = *o.batch;
    if (o.patience)
        tc.early_stop_patience = *o.patience;
    if (o.drop_period)
        tc.lr_drop_period_epochs = *o.drop_period;
    tc.validate();

    const fs::path path = o.manifest.empty() ? default_manifest(cfg) : fs::path(o.manifest);
    const auto manifest = load_manifest_or_usage(path);
    if (manifest.folds < 2)
        throw UsageError("manifest has no fold assignment (run 'amc split')");
    if (!o.kfold && o.fold >= manifest.folds)
        throw UsageError("--fold must be below " + std::to_string(manifest.folds));

    const fs::path models = cfg.output_dir / "models";
    ensure_dir(models);
    cfg.save(cfg.output_dir / "config.json");

    std::vector<std::size_t> folds;
    if (o.kfold)
        for (std::size_t f = 0; f < manifest.folds; ++f)
            folds.push_back(f);
    else
        folds.push_back(o.fold);

    for (std::size_t fold : folds) {
        const Split split = load_split(manifest, path.parent_path(), fold, o.snr);
        if (split.train.empty() || split.test.empty())
            throw UsageError("fold " + std::to_string(fold) + " has an empty train or test set");
        NetSpec spec = cfg.net ? *cfg.net
                               : NetSpec::default_net(manifest.schemes.size(), split.train.shape,
                                                      derive_seed(*cfg.seed, {seed_tag::kInit}));
        spec.input = split.train.shape;
        TrainConfig fold_cfg = tc;
        fold_cfg.seed = derive_seed(tc.seed, {fold});

        std::printf("fold %zu: %zu train, %zu validation images, %zu parameters\n", fold,
                    split.train.size(), split.test.size(), Network(spec).parameter_count());
        std::fflush(stdout);
        auto progress = [&](const HistoryRow& r) {
            if (o.quiet || !r.val_loss)
                return;
            std::printf("  iter %5zu epoch %3zu lr %.1e train_loss %.4f val_loss %.4f val_acc "
                        "%.4f\n",
                        r.iteration, r.epoch, r.lr, r.train_loss, *r.val_loss, *r.val_accuracy);
            std::fflush(stdout);
        };
        const TrainResult result = train(spec, fold_cfg, split.train, split.test, progress);

        const fs::path ckpt = models / ("fold" + std::to_string(fold) + ".ckpt");
        const fs::path hist = models / ("fold" + std::to_string(fold) + "_history.csv");
        save_checkpoint(ckpt, result.net, manifest.class_names());
        write_history_csv(hist, result.history);
        const auto [loss, acc] = loss_and_accuracy(result.net, split.test);
        std::printf("fold %zu: stop=%s iterations=%zu best_iteration=%zu val_loss=%.4f "
                    "val_accuracy=%.4f\n  %s\n  %s\n",
                    fold, result.stop_reason.c_str(), result.iterations, result.best_iteration,
                    loss, acc, ckpt.string().c_str(), hist.string().c_str());
    }
    return 0;
}

// ----------------------------------------------------------------- eval

struct EvalOpts {
    std::string checkpoint;
    std::string manifest;
    std::size_t fold = 0;
    bool all = false;
    std::optional<int> snr;
};

int cmd_eval(const Globals& g, const EvalOpts& o)
{
    const PipelineConfig cfg = resolve_config(g);
    const fs::path ckpt_path =
        o.checkpoint.empty() ? cfg.output_dir / "models" / ("fold" + std::to_string(o.fold) + ".ckpt")
                             : fs::path(o.checkpoint);
    if (!fs::exists(ckpt_path))
        throw UsageError("checkpoint not found: " + ckpt_path.string() + " (run 'amc train')");
    const fs::path path = o.manifest.empty() ? default_manifest(cfg) : fs::path(o.manifest);
    const auto manifest = load_manifest_or_usage(path);

    const Checkpoint ckpt = load_checkpoint(ckpt_path);
    if (ckpt.class_names != manifest.class_names())
        throw UsageError("checkpoint classes do not match the manifest");

    ImageSet test;
    if (o.all) {
        test = load_all(manifest, path.parent_path(), o.snr);
    } else {
        if (o.fold >= manifest.folds)
            throw UsageError("--fold must be below " + std::to_string(manifest.folds));
        test = load_split(manifest, path.parent_path(), o.fold, o.snr).test;
    }
    if (test.empty())
        throw UsageError("no images selected for evaluation");

    const EvalReport report = evaluate(ckpt.net, test);
    const std::string text = format_report(report);
    std::cout << text;

    const fs::path dir = cfg.output_dir / "eval";
    ensure_dir(dir);
    write_confusion_csv(dir / "confusion.csv", report.confusion);
    write_png(dir / "confusion.png", confusion_heatmap(report.confusion));
    std::ofstream(dir / "report.txt") << text;
    std::printf("\nwrote %s, %s, %s\n", (dir / "confusion.csv").string().c_str(),
                (dir / "confusion.png").string().c_str(), (dir / "report.txt").string().c_str());
    return 0;
}

// ---------------------------------------------------------------- bench

struct BenchOpts {
    std::size_t frames = 1000;
    std::size_t runs = 5;
    std::string csv;
};

int cmd_bench(const Globals& g, const BenchOpts& o)
{
    const PipelineConfig cfg = resolve_config(g);
    const auto hi = SpectrogramConfig::highres();
    const auto lo = SpectrogramConfig::transformed();
    const std::size_t len_hi = 8192;
    const std::size_t len_lo = cfg.dataset.frame.frame_length;
    const double fs_hz = cfg.dataset.frame.sample_rate_hz;

    std::printf("Cost model (NFFT %zu vs %zu)\n", hi.nfft, lo.nfft);
    std::vector<CostReport> reports;
    for (auto model : {CostModel::Linear, CostModel::NLogN}) {
        reports.push_back(cost_report(hi.nfft, lo.nfft, model, len_hi, len_lo));
        std::printf("  %-6s reduction %.2f%%\n", std::string(to_string(model)).c_str(),
                    reports.back().reduction_pct);
    }
    std::printf("Acquisition span: %.2f ms (%zu samples) vs %.2f ms (%zu samples), ratio %.2f\n",
                1e3 * acquisition_time(len_hi, fs_hz), len_hi, 1e3 * acquisition_time(len_lo, fs_hz),
                len_lo, reports.front().span_ratio);

    const BenchTiming t = bench_presets(hi, lo, o.frames, o.runs, *cfg.seed, len_hi, len_lo);
    std::printf("Wall clock over %zu frames, median of %zu runs:\n", t.frames, o.runs);
    std::printf("  highres     %.4f s\n  transformed %.4f s\n  speedup     %.2fx\n", t.median_hi,
                t.median_lo, t.speedup());

    const fs::path csv = o.csv.empty() ? cfg.output_dir / "bench.csv" : fs::path(o.csv);
    if (csv.has_parent_path())
        ensure_dir(csv.parent_path());
    std::ofstream out(csv, std::ios::trunc);
    if (!out)
        throw IoError("cannot create " + csv.string());
    out << "model,nfft_hi,nfft_lo,reduction_pct,span_ratio,frames,runs,wall_clock_hi_s,"
           "wall_clock_lo_s,speedup\n";
    for (const auto& r : reports)
        out << to_string(r.model) << ',' << r.nfft_hi << ',' << r.nfft_lo << ','
            << r.reduction_pct << ',' << r.span_ratio << ',' << t.frames << ',' << o.runs << ','
            << t.median_hi << ',' << t.median_lo << ',' << t.speedup() << '\n';
    if (!out)
        throw IoError("write failed: " + csv.string());
    std::printf("wrote %s\n", csv.string().c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spectrogram-based automatic modulation classification pipeline"};
    app.name("amc");
    app.require_subcommand(0, 1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config_path, "JSON pipeline configuration file");
    app.add_option("--seed", g.seed, "Master seed (overrides the config's \"seed\")");
    app.add_option("--jobs", g.jobs, "Worker threads for dataset and spectrogram stages")
        ->capture_default_str();
    app.add_option("--out", g.out, "Output directory (default: config output_dir)");
    app.add_flag("--print-config", g.print_config,
                 "Print the effective configuration as JSON and exit");

    SynthOpts so;
    auto* synth = app.add_subcommand("synth", "Synthesize frames into an IQ archive");
    synth->add_option("--scheme", so.schemes, "Schemes to synthesize, or 'all'")->capture_default_str();
    synth->add_option("--count", so.count, "Frames per scheme")->capture_default_str();
    synth->add_option("--snr", so.snr_db, "Apply a drawn channel at this SNR (dB)");
    synth->add_option("--length", so.length, "Frame length in samples");
    synth->add_option("--file", so.file, "Archive path (default: <out>/frames.iqf)");

    SpectrogramOpts po;
    auto* spectro = app.add_subcommand("spectrogram", "Render spectrogram images");
    spectro->add_option("--input", po.input, "IQ archive to convert (default: synthesize)");
    spectro->add_option("--scheme", po.schemes, "Schemes to synthesize when no input is given")
        ->capture_default_str();
    spectro->add_option("--count", po.count, "Frames per scheme when synthesizing")
        ->capture_default_str();
    spectro->add_option("--snr", po.snr_db, "Apply a drawn channel at this SNR (dB)");
    spectro->add_option("--length", po.length, "Frame length in samples when synthesizing");
    spectro->add_option("--preset", po.preset, "Spectrogram preset")
        ->check(CLI::IsMember({"transformed", "highres"}));
    spectro->add_option("--palette", po.palette, "grayscale or colormapped");
    spectro->add_option("--height", po.height, "Image height in pixels");
    spectro->add_option("--width", po.width, "Image width in pixels");
    spectro->add_flag("--raw", po.raw, "Also write float32 grids with a descriptor");

    DatasetOpts dso;
    auto* dataset = app.add_subcommand("dataset", "Build the labeled image dataset");
    dataset->add_option("--schemes", dso.schemes, "Schemes to include, or 'all'");
    dataset->add_option("--samples", dso.samples, "Samples per class (per SNR in per_snr layout)");
    dataset->add_option("--snr", dso.snr, "SNR values in dB");
    dataset->add_option("--layout", dso.layout, "SNR layout")
        ->check(CLI::IsMember({"per_snr", "mixed"}));
    dataset->add_option("--folds", dso.folds, "Cross-validation folds");
    dataset->add_option("--palette", dso.palette, "grayscale or colormapped");
    dataset->add_option("--size", dso.size, "Square image size in pixels");

    SplitOpts spo;
    auto* split = app.add_subcommand("split", "Verify a dataset and reassign its folds");
    split->add_option("--manifest", spo.manifest, "Manifest path (default: <out>/dataset/manifest.json)");
    split->add_option("--k", spo.k, "Number of folds");
    split->add_option("--split-seed", spo.split_seed, "Seed for the fold shuffle");

    TrainOpts to;
    auto* trn = app.add_subcommand("train", "Train the classifier on one fold or all folds");
    trn->add_option("--manifest", to.manifest, "Manifest path (default: <out>/dataset/manifest.json)");
    trn->add_option("--fold", to.fold, "Held-out fold")->capture_default_str();
    trn->add_flag("--kfold", to.kfold, "Train once per fold");
    trn->add_option("--snr", to.snr, "Use only entries at this SNR (dB)");
    trn->add_option("--epochs", to.epochs, "Maximum epochs");
    trn->add_option("--lr", to.lr, "Initial learning rate");
    trn->add_option("--batch", to.batch, "Mini-batch size");
    trn->add_option("--patience", to.patience, "Early-stopping patience (validation checks)");
    trn->add_option("--drop-period", to.drop_period, "Epochs between learning-rate drops");
    trn->add_flag("--quiet", to.quiet, "Do not print validation checks");

    EvalOpts eo;
    auto* ev = app.add_subcommand("eval", "Evaluate a checkpoint and write reports");
    ev->add_option("--checkpoint", eo.checkpoint, "Checkpoint (default: <out>/models/fold<k>.ckpt)");
    ev->add_option("--manifest", eo.manifest, "Manifest path (default: <out>/dataset/manifest.json)");
    ev->add_option("--fold", eo.fold, "Fold to evaluate")->capture_default_str();
    ev->add_flag("--all", eo.all, "Evaluate every entry instead of one fold");
    ev->add_option("--snr", eo.snr, "Use only entries at this SNR (dB)");

    BenchOpts bo;
    auto* bench = app.add_subcommand("bench", "Cost model and wall-clock spectrogram benchmark");
    bench->add_option("--frames", bo.frames, "Frames per timed run")->capture_default_str();
    bench->add_option("--runs", bo.runs, "Timed runs (median is reported)")->capture_default_str();
    bench->add_option("--csv", bo.csv, "CSV path (default: <out>/bench.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        report_error("usage", e.what());
        return 2;
    }

    try {
        if (g.print_config) {
            std::cout << resolve_config(g).to_json().dump(2) << '\n';
            return 0;
        }
        if (synth->parsed())
            return cmd_synth(g, so);
        if (spectro->parsed())
            return cmd_spectrogram(g, po);
        if (dataset->parsed())
            return cmd_dataset(g, dso);
        if (split->parsed())
            return cmd_split(g, spo);
        if (trn->parsed())
            return cmd_train(g, to);
        if (ev->parsed())
            return cmd_eval(g, eo);
        if (bench->parsed())
            return cmd_bench(g, bo);
        report_error("usage", "a subcommand is required; see --help");
        return 2;
    } catch (const Error& e) {
        report_error(e.kind(), e.what());
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        report_error("internal", e.what());
        return 1;
    }
    return 0;
}
