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


// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.
//
//   amc_acceptance [output_dir]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "amc/bench.hpp"
#include "amc/channel.hpp"
#include "amc/dataset.hpp"
#include "amc/digest.hpp"
#include "amc/error.hpp"
#include "amc/dnn.hpp"
#include "amc/evaluate.hpp"
#include "amc/fft.hpp"
#include "amc/image.hpp"
#include "amc/seed.hpp"
#include "amc/stft.hpp"
#include "amc/train.hpp"
#include "amc/wavegen.hpp"

namespace fs = std::filesystem;
using namespace amc;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof(buf), f, args...);
    return buf;
}

fs::path g_out;

// ---------------------------------------------------------------- 1, 2

Outcome cost_reduction()
{
    const auto r = cost_report(8192, 32, CostModel::Linear);
    const double rounded = std::round(r.reduction_pct * 100.0) / 100.0;
    return {rounded == 99.61, fmt("linear 8192->32 reduction %.4f%% (rounded %.2f%%)",
                                  r.reduction_pct, rounded)};
}

Outcome acquisition_span()
{
    const double lo = acquisition_time(1024, 200'000.0) * 1e3;
    const double hi = acquisition_time(8192, 200'000.0) * 1e3;
    const double ratio = cost_report(8192, 32, CostModel::Linear, 8192, 1024).span_ratio;
    const bool ok = std::abs(lo - 5.12) < 1e-9 && std::abs(hi - 40.96) < 1e-9 &&
                    fmt("%.2f", ratio) == "8.00";
    return {ok, fmt("1024 samples %.2f ms, 8192 samples %.2f ms, ratio %.2f", lo, hi, ratio)};
}

// ---------------------------------------------------------------- 3

Outcome wall_clock()
{
    const auto t = bench_presets(SpectrogramConfig::highres(), SpectrogramConfig::transformed(),
                                 1000, 5, 2026);
    return {t.speedup() >= 8.0,
            fmt("median over 5 runs of 1000 frames: high-res %.3f s, transformed %.4f s, "
                "speedup %.1fx",
                t.median_hi, t.median_lo, t.speedup())};
}

// ---------------------------------------------------------------- 4

Outcome stft_oracles()
{
    Rng rng(404);
    std::normal_distribution<double> nd;
    double worst_fft = 0.0;
    for (int c = 0; c < 100; ++c) {
        const std::size_t nfft = std::size_t{1} << (3 + c % 8);
        const std::size_t len = 1 + rng() % nfft;
        std::vector<std::complex<double>> seg(len);
        for (auto& x : seg)
            x = {nd(rng), nd(rng)};
        std::vector<std::complex<double>> buf(nfft, 0.0);
        std::copy(seg.begin(), seg.end(), buf.begin());
        Fft(nfft).forward(buf);
        const auto ref = naive_dft(seg, nfft);
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < nfft; ++k) {
            num = std::max(num, std::abs(buf[k] - ref[k]));
            den = std::max(den, std::abs(ref[k]));
        }
        worst_fft = std::max(worst_fft, num / den);
    }

    SpectrogramConfig rect = SpectrogramConfig::transformed();
    rect.window = WindowKind::Rectangular;
    const StftEngine rect_engine(rect);
    double worst_parseval = 0.0;
    for (int c = 0; c < 100; ++c) {
        std::vector<Sample> x(64);
        for (auto& s : x)
            s = {nd(rng), nd(rng)};
        const std::size_t f = rng() % spectrogram_length(x.size(), rect.window_len, rect.overlap);
        const auto X = rect_engine.frame_spectrum(x, f);
        double et = 0.0, ef = 0.0;
        for (std::size_t i = 0; i < rect.window_len && f * rect.hop() + i < x.size(); ++i)
            et += std::norm(x[f * rect.hop() + i]);
        for (auto v : X)
            ef += std::norm(v);
        worst_parseval = std::max(worst_parseval, std::abs(ef / rect.nfft - et) / et);
    }

    const auto cfg = SpectrogramConfig::transformed();
    const StftEngine engine(cfg);
    std::size_t localized = 0;
    for (std::size_t j = 0; j < cfg.bins(); ++j) {
        const double f = bin_frequency(cfg, j, 200'000.0);
        std::vector<Sample> x(1024);
        for (std::size_t n = 0; n < x.size(); ++n)
            x[n] = std::polar(1.0, 2.0 * std::numbers::pi * f * static_cast<double>(n) / 200'000.0);
        const auto s = engine.compute(x, 200'000.0);
        bool all = true;
        for (std::size_t t = 0; t < s.n_frames; ++t) {
            const auto row = s.row(t);
            if (static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin()) !=
                j)
                all = false;
        }
        localized += all;
    }
    const bool ok = worst_fft < 1e-9 && worst_parseval < 1e-9 && localized == cfg.bins();
    return {ok, fmt("FFT vs DFT max rel err %.2e; Parseval max rel err %.2e; %zu/%zu bins "
                    "localized",
                    worst_fft, worst_parseval, localized, cfg.bins())};
}

// ---------------------------------------------------------------- 5

std::size_t placements_to_cover(std::size_t sl, std::size_t w, std::size_t o)
{
    std::size_t n = 0;
    for (std::size_t start = 0;; start += w - o) {
        ++n;
        if (start + w >= sl)
            return n;
    }
}

Outcome length_conformance()
{
    const fs::path log_path = g_out / "spectrogram_length_log.txt";
    std::ofstream log(log_path);
    log << "# sl w o formula brute_force starts_inside_signal\n";
    std::size_t triples = 0, mismatches = 0, logged = 0;
    bool has_1024 = false;
    auto check = [&](std::size_t sl, std::size_t w, std::size_t o) {
        const std::size_t got = spectrogram_length(sl, w, o);
        const std::size_t want = placements_to_cover(sl, w, o);
        const std::size_t hop = w - o;
        const std::size_t inside = (sl + hop - 1) / hop;
        ++triples;
        if (got != want)
            ++mismatches;
        // Log every divisible case where counting starts inside the signal disagrees.
        if ((sl - w) % hop == 0 && inside != got) {
            log << sl << ' ' << w << ' ' << o << ' ' << got << ' ' << want << ' ' << inside << '\n';
            ++logged;
            if (sl == 1024 && w == 8 && o == 4 && got == 255 && inside == 256)
                has_1024 = true;
        }
    };
    for (std::size_t w = 1; w <= 16; ++w)
        for (std::size_t o = 0; o < w; ++o)
            for (std::size_t sl : {w, w + 1, w + 5, 2 * w + 3, std::size_t{100}, std::size_t{1024}})
                check(sl, w, o);
    check(8192, 4096, 3584);
    const bool ok = triples >= 200 && mismatches == 0 && has_1024;
    return {ok, fmt("%zu triples, %zu mismatches, %zu exact-division cases logged to %s "
                    "(1024/8/4: 255 frames vs 256 window starts %s)",
                    triples, mismatches, logged, log_path.string().c_str(),
                    has_1024 ? "logged" : "MISSING")};
}

// ---------------------------------------------------------------- 6

Outcome channel_calibration()
{
    std::vector<Sample> clean(100'000);
    Rng rng(606);
    std::uniform_int_distribution<int> bit(0, 1);
    for (auto& s : clean)
        s = Sample{bit(rng) ? 1.0 : -1.0, bit(rng) ? 1.0 : -1.0} / std::sqrt(2.0);
    IQFrame f;
    f.samples = clean;
    std::string detail = "measured SNR:";
    bool ok = true;
    for (int snr : {5, 10, 15, 20, 25, 30}) {
        const auto g = apply_awgn(f, snr, derive_seed(606, {static_cast<std::uint64_t>(snr)}));
        double ps = 0.0, pn = 0.0;
        for (std::size_t i = 0; i < clean.size(); ++i) {
            ps += std::norm(clean[i]);
            pn += std::norm(g.samples[i] - clean[i]);
        }
        const double m = 10.0 * std::log10(ps / pn);
        ok = ok && std::abs(m - snr) <= 0.5;
        detail += fmt(" %d->%.3f", snr, m);
    }
    double worst = 0.0;
    for (double cfo : {-9'999.0, -120.5, 0.0, 480.0, 75'000.0}) {
        const auto g = apply_cfo_phase(f, cfo, 2.3);
        for (std::size_t i = 0; i < clean.size(); ++i)
            worst = std::max(worst, std::abs(std::abs(g.samples[i]) - std::abs(clean[i])) /
                                        std::abs(clean[i]));
    }
    ok = ok && worst < 1e-6;
    detail += fmt("; CFO/phase max magnitude rel err %.2e", worst);
    return {ok, detail};
}

// ---------------------------------------------------------------- 7

std::map<std::string, std::vector<std::uint8_t>> tree_bytes(const fs::path& root)
{
    std::map<std::string, std::vector<std::uint8_t>> out;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file())
            out[fs::relative(e.path(), root).generic_string()] = read_file(e.path());
    return out;
}

Outcome dataset_properties()
{
    DatasetConfig cfg;
    cfg.samples_per_class = 50;
    cfg.snr_list_db = {10};
    cfg.folds = 5;
    cfg.frame.master_seed = 707;
    cfg.split_seed = derive_seed(707, {seed_tag::kSplit});
    const fs::path a = g_out / "dataset_a", b = g_out / "dataset_b", c = g_out / "dataset_c";
    for (const auto& p : {a, b, c})
        fs::remove_all(p);
    const auto ma = build_dataset(cfg, a, 1);
    build_dataset(cfg, b, 1);
    build_dataset(cfg, c, 8);
    const auto ta = tree_bytes(a);
    const bool identical_runs = ta == tree_bytes(b);
    const bool identical_jobs = ta == tree_bytes(c);
    bool verified = true;
    try {
        verify_manifest(ma, a);
    } catch (const Error&) {
        verified = false;
    }

    // Fold properties: each cell deals within one, every entry tested exactly once.
    std::map<std::pair<Modulation, int>, std::vector<int>> cell;
    std::size_t tested = 0;
    for (std::size_t f = 0; f < 5; ++f)
        for (const auto& e : ma.entries)
            if (e.fold == static_cast<int>(f))
                ++tested;
    for (const auto& e : ma.entries) {
        auto& v = cell[{e.scheme, e.snr_db}];
        v.resize(5);
        if (e.fold >= 0 && e.fold < 5)
            ++v[static_cast<std::size_t>(e.fold)];
    }
    int worst_dev = 0;
    for (const auto& [key, v] : cell) {
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        worst_dev = std::max(worst_dev, *hi - *lo);
    }
    const bool ok = ma.entries.size() == 550 && identical_runs && identical_jobs && verified &&
                    tested == 550 && worst_dev <= 1 && cell.size() == 11;
    for (const auto& p : {b, c})
        fs::remove_all(p);
    return {ok, fmt("%zu entries; run-to-run identical: %s; jobs 1 vs 8 identical: %s; "
                    "digests verified: %s; %zu cells, max per-cell fold deviation %d; "
                    "%zu/550 entries tested once",
                    ma.entries.size(), identical_runs ? "yes" : "no",
                    identical_jobs ? "yes" : "no", verified ? "yes" : "no", cell.size(),
                    worst_dev, tested)};
}

// ---------------------------------------------------------------- 8

ImageSet rendered_set(const std::vector<Modulation>& schemes, const std::vector<int>& snrs,
                      std::size_t first, std::size_t count, std::uint64_t master,
                      std::size_t size = 64)
{
    DatasetConfig cfg;
    cfg.schemes = schemes;
    cfg.image_height = cfg.image_width = size;
    const StftEngine engine(cfg.spectrogram);
    ImageSet set;
    set.shape = {size, size, 1};
    for (auto m : schemes)
        set.class_names.emplace_back(name(m));
    for (std::size_t c = 0; c < schemes.size(); ++c)
        for (std::size_t s = 0; s < snrs.size(); ++s)
            for (std::size_t i = first; i < first + count; ++i) {
                const auto seed = frame_seed(master, schemes[c], s * 100'000 + i);
                const Image img = render_sample(cfg, engine, schemes[c], snrs[s], seed);
                LabeledImage it;
                it.label = c;
                it.snr_db = snrs[s];
                it.pixels.reserve(img.pixels.size());
                for (auto p : img.pixels)
                    it.pixels.push_back(p / 255.0);
                set.items.push_back(std::move(it));
            }
    return set;
}

double gradient_rel_error(const NetSpec& spec, double l2, const Pass& pass, std::uint64_t seed)
{
    Rng rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Network net(spec);
    const std::size_t batch = 3;
    Matrix x(static_cast<Eigen::Index>(spec.input.size()), batch);
    for (Eigen::Index i = 0; i < x.size(); ++i)
        x.data()[i] = u(rng);
    std::vector<std::size_t> y;
    for (std::size_t i = 0; i < batch; ++i)
        y.push_back(i % net.num_classes());

    net.loss_and_grads(x, y, l2, pass);
    auto params = net.parameters();
    std::vector<Matrix> analytic;
    for (auto* p : params)
        analytic.push_back(p->grad);
    double worst = 0.0;
    const double h = 1e-6;
    for (std::size_t pi = 0; pi < params.size(); ++pi) {
        Matrix& w = params[pi]->value;
        const Eigen::Index n = w.size();
        for (Eigen::Index s = 0; s < std::min<Eigen::Index>(n, 30); ++s) {
            const Eigen::Index i = n <= 30 ? s : static_cast<Eigen::Index>(rng() % n);
            const double orig = w.data()[i];
            w.data()[i] = orig + h;
            const double lp = net.loss_and_grads(x, y, l2, pass);
            w.data()[i] = orig - h;
            const double lm = net.loss_and_grads(x, y, l2, pass);
            w.data()[i] = orig;
            const double num = (lp - lm) / (2.0 * h);
            const double ana = analytic[pi].data()[i];
            const double scale = std::max(std::abs(num), std::abs(ana));
            // Entries below the difference quotient's noise floor are compared absolutely.
            const double err = scale > 1e-5 ? std::abs(num - ana) / scale : std::abs(num - ana);
            worst = std::max(worst, err);
        }
    }
    return worst;
}

NetSpec small_net(Shape in, std::vector<LayerSpec> body, std::size_t k)
{
    NetSpec s;
    s.input = in;
    s.layers = std::move(body);
    s.layers.push_back(LayerSpec::dense(k));
    s.layers.push_back(LayerSpec::softmax());
    s.init_seed = 808;
    return s;
}

Outcome classifier_numerics()
{
    struct Case {
        const char* layer;
        NetSpec spec;
        double l2;
        Pass pass;
    };
    const std::vector<Case> cases{
        {"conv", small_net({5, 5, 2}, {LayerSpec::conv(3, 3)}, 3), 0.0, {}},
        {"conv/2", small_net({6, 6, 1}, {LayerSpec::conv(3, 2, 2)}, 3), 0.0, {}},
        {"relu", small_net({4, 4, 1}, {LayerSpec::conv(3, 4), LayerSpec::relu()}, 3), 0.0, {}},
        {"maxpool", small_net({6, 6, 1}, {LayerSpec::conv(3, 2), LayerSpec::maxpool(2, 2)}, 3),
         0.0, {}},
        {"dense", small_net({3, 3, 1}, {LayerSpec::dense(6)}, 4), 0.0, {}},
        {"dropout", small_net({4, 4, 1}, {LayerSpec::dense(12), LayerSpec::dropout(0.5)}, 3), 0.0,
         Pass{true, 88}},
        {"softmax+xent+l2", small_net({3, 3, 1}, {}, 5), 0.2, {}},
    };
    std::string detail = "gradient rel err:";
    bool ok = true;
    for (const auto& c : cases) {
        const double e = gradient_rel_error(c.spec, c.l2, c.pass, 808);
        ok = ok && e < 1e-4;
        detail += fmt(" %s %.1e", c.layer, e);
    }

    // Uniform prediction.
    const std::size_t k = 4;
    Network zero(NetSpec::default_net(k));
    for (auto* p : zero.parameters())
        p->value.setZero();
    Matrix x = Matrix::Random(64 * 64, 8).cwiseAbs();
    const std::vector<std::size_t> y{0, 1, 2, 3, 0, 1, 2, 3};
    const double l = zero.loss(x, y, 0.0);
    ok = ok && std::abs(l - std::log(static_cast<double>(k))) < 1e-6;
    detail += fmt("; uniform loss %.9f vs ln4 %.9f", l, std::log(4.0));

    // Single-batch overfit with the default network.
    const auto batch = rendered_set({Modulation::BPSK, Modulation::QPSK, Modulation::QAM16,
                                     Modulation::AMSSB},
                                    {10}, 0, 4, 8080);
    TrainConfig tc;
    tc.max_epochs = 200;
    tc.batch_size = batch.size();
    tc.initial_lr = 1e-3;
    tc.lr_drop_period_epochs = 1000;
    tc.validation_frequency_iters = 1;
    tc.early_stop_patience = 0;
    tc.l2 = 0.0;
    tc.seed = 8;
    std::size_t reached = 0;
    const auto r = train(NetSpec::default_net(4, batch.shape, 8), tc, batch, batch,
                         [&](const HistoryRow& h) {
                             if (!reached && h.val_accuracy && *h.val_accuracy == 1.0)
                                 reached = h.epoch;
                         });
    (void)r;
    ok = ok && reached != 0 && reached <= 200;
    detail += reached ? fmt("; overfit %zu images to 100%% at epoch %zu", batch.size(), reached)
                      : std::string("; overfit did not reach 100% in 200 epochs");
    return {ok, detail};
}

// ---------------------------------------------------------------- 9

Outcome separability()
{
    const std::vector<Modulation> schemes{Modulation::BPSK, Modulation::GFSK, Modulation::PAM4,
                                          Modulation::WBFM};
    const std::uint64_t master = 909;
    const auto train_set = rendered_set(schemes, {20}, 0, 200, master);
    const auto val_set = rendered_set(schemes, {20}, 200, 50, master);
    const auto test_set = rendered_set(schemes, {20}, 250, 50, master);

    TrainConfig tc;
    tc.initial_lr = 1e-3;
    tc.lr_drop_period_epochs = 10;
    tc.max_epochs = 30;
    tc.seed = derive_seed(master, {seed_tag::kShuffle});
    const auto r = train(NetSpec::default_net(4, train_set.shape,
                                              derive_seed(master, {seed_tag::kInit})),
                         tc, train_set, val_set);
    const auto rep = evaluate(r.net, test_set);
    const double acc = rep.confusion.accuracy();
    std::ofstream(g_out / "separability_report.txt") << format_report(rep);
    return {acc >= 0.85,
            fmt("test accuracy %.2f%% on %zu images (chance 25%%); %zu iterations, stop=%s",
                100.0 * acc, test_set.size(), r.iterations, r.stop_reason.c_str())};
}

// ---------------------------------------------------------------- 10

Outcome report_parity()
{
    const std::vector<Modulation> schemes(kAllModulations.begin(), kAllModulations.end());
    const std::vector<int> snrs{10, 20};
    const std::uint64_t master = 1010;
    const auto train_set = rendered_set(schemes, snrs, 0, 30, master);
    const auto test_set = rendered_set(schemes, snrs, 30, 10, master);

    TrainConfig tc;
    tc.initial_lr = 1e-3;
    tc.lr_drop_period_epochs = 10;
    tc.max_epochs = 5;
    tc.early_stop_patience = 0;
    tc.seed = derive_seed(master, {seed_tag::kShuffle});
    const auto r = train(NetSpec::default_net(schemes.size(), train_set.shape,
                                              derive_seed(master, {seed_tag::kInit})),
                         tc, train_set, test_set);
    const auto rep = evaluate(r.net, test_set);
    const std::string text = format_report(rep);
    const fs::path dir = g_out / "eval";
    fs::create_directories(dir);
    std::ofstream(dir / "report.txt") << text;
    write_confusion_csv(dir / "confusion.csv", rep.confusion);
    const Image heat = confusion_heatmap(rep.confusion);
    write_png(dir / "confusion.png", heat);

    bool ok = text.find("Per-class accuracy") != std::string::npos &&
              text.find("Per-SNR accuracy") != std::string::npos &&
              text.find("16-QAM and 64-QAM are very similar") != std::string::npos &&
              heat.height == 11 * 24 && heat.width == 11 * 24 && fs::exists(dir / "confusion.png");
    for (auto m : schemes)
        ok = ok && text.find(std::string("  ") + std::string(name(m))) != std::string::npos;
    for (int s : snrs)
        ok = ok && text.find(fmt("  %-8d", s)) != std::string::npos;
    return {ok, fmt("11-class report (%.2f%% overall, annotation only) and %zux%zu heatmap in %s",
                    100.0 * rep.confusion.accuracy(), heat.height, heat.width,
                    dir.string().c_str())};
}

} // namespace

int main(int argc, char** argv)
{
    g_out = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_out");
    fs::create_directories(g_out);

    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"cost reduction", cost_reduction},
        {"acquisition span", acquisition_span},
        {"wall-clock speedup", wall_clock},
        {"STFT oracles", stft_oracles},
        {"spectrogram length", length_conformance},
        {"channel calibration", channel_calibration},
        {"dataset and k-fold", dataset_properties},
        {"classifier numerics", classifier_numerics},
        {"desk-scale separability", separability},
        {"report parity", report_parity},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s criterion %zu (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1,
                    criteria[i].first, o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += !o.pass;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
