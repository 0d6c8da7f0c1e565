#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "detect.hpp"
#include "metrics.hpp"
#include "report.hpp"
#include "transform.hpp"
#include "types.hpp"

namespace cadt {

struct RunConfig {
    std::filesystem::path corpus_dir;
    std::filesystem::path out_dir;
    std::vector<Method> detectors{Method::cpda, Method::ctar, Method::ctaa,
                                  Method::cadt};
    std::optional<Family> family;  // restrict to one transform family
    std::uint64_t seed = 0;
    int jobs = 1;
    PipelineConfig pipeline;
    double matching_radius = 3.0;
    bool write_reports = true;  // records/summary/charts/warnings files
};

struct BenchResult {
    std::vector<EvalRecord> records;
    Summary summary;
    std::vector<std::string> warnings;
    int skipped = 0;  // failed work items, logged and left out
};

// Corpus images: every *.png / *.pgm directly in the directory, sorted by
// filename so runs are order-stable across filesystems.
inline std::vector<std::filesystem::path> list_corpus(
    const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw IoError("corpus directory not found: " + dir.string());
    std::vector<std::filesystem::path> out;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        auto ext = entry.path().extension().string();
        if (ext == ".png" || ext == ".pgm") out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace detail {

struct CorpusImage {
    std::string stem;
    GrayImage image;
    // original-image corners, aligned with RunConfig::detectors
    std::vector<std::vector<Corner>> corners;
};

// Loads the transformed image for (img, spec) from the cache if the files
// are present and consistent, else renders and stores it. Noise renders
// carry a seed sidecar so a rerun with another seed does not reuse them.
inline TransformedImage cached_transform(const RunConfig& rc,
                                         const CorpusImage& ci,
                                         const TransformSpec& spec) {
    const std::string params = param_string(spec);
    const std::uint64_t seed = derive_seed(rc.seed, ci.stem, params);
    const auto dir = rc.out_dir / ci.stem / family_name(spec.family);
    const auto png = dir / (params + ".png");
    const auto affine = dir / (params + ".affine");
    const auto seed_file = dir / (params + ".seed");
    const bool noisy = spec.family == Family::gaussian_noise;

    if (std::filesystem::exists(png) && std::filesystem::exists(affine)) {
        bool seed_ok = !noisy;
        if (noisy) {
            std::ifstream in(seed_file);
            std::uint64_t cached = 0;
            if (in >> cached) seed_ok = cached == seed;
        }
        if (seed_ok) {
            try {
                return {load_image(png), spec, read_affine(affine)};
            } catch (const Error&) {
                // fall through and regenerate a bad cache entry
            }
        }
    }
    TransformedImage t = apply_transform(ci.image, spec, seed);
    save_image(t.image, png);
    write_affine(affine, t.forward_map);
    if (noisy) {
        std::ofstream out(seed_file);
        out << seed << "\n";
    }
    return t;
}

}  // namespace detail

// Runs the transformation suite over the corpus for every configured
// detector. Work items are (image, spec) pairs; failures are logged and
// skipped. Results are deterministic for a given seed regardless of the
// number of worker threads, since each item's records land in a
// preassigned slot.
inline BenchResult run_bench(const RunConfig& rc, std::ostream* log = nullptr) {
    rc.pipeline.detector.validate();
    if (rc.jobs < 1)
        throw std::invalid_argument("jobs must be >= 1");
    if (rc.detectors.empty())
        throw std::invalid_argument("no detectors selected");
    std::mutex log_mutex;
    auto logln = [&](const std::string& s) {
        if (!log) return;
        std::lock_guard<std::mutex> lock(log_mutex);
        (*log) << s << "\n";
    };

    BenchResult result;
    result.warnings = suite_warnings();

    auto files = list_corpus(rc.corpus_dir);
    if (files.empty())
        throw DegenerateInput("corpus is empty: " + rc.corpus_dir.string());

    std::vector<detail::CorpusImage> images;
    for (const auto& path : files) {
        try {
            detail::CorpusImage ci;
            ci.stem = path.stem().string();
            ci.image = load_image(path);
            Preprocessed pre = preprocess(ci.image, rc.pipeline);
            for (Method m : rc.detectors)
                ci.corners.push_back(
                    detect_on_curves(pre.curves, pre.junctions, m,
                                     rc.pipeline.detector));
            images.push_back(std::move(ci));
        } catch (const std::exception& e) {
            ++result.skipped;
            logln("skip image " + path.string() + ": " + e.what());
        }
    }
    if (images.empty())
        throw DegenerateInput("no readable corpus image in " +
                              rc.corpus_dir.string());

    const auto specs = enumerate_suite(rc.family);
    if (specs.empty())
        throw std::invalid_argument("transform suite is empty");

    // pre-create cache directories; workers then never race on mkdir
    for (const auto& ci : images)
        for (Family f : kAllFamilies)
            if (!rc.family || *rc.family == f)
                std::filesystem::create_directories(rc.out_dir / ci.stem /
                                                    family_name(f));

    const size_t total = images.size() * specs.size();
    std::vector<std::vector<EvalRecord>> slots(total);
    std::atomic<size_t> next{0};
    std::atomic<int> skipped{0};
    std::atomic<size_t> done{0};

    auto worker = [&]() {
        while (true) {
            size_t item = next.fetch_add(1);
            if (item >= total) return;
            const auto& ci = images[item / specs.size()];
            const TransformSpec& spec = specs[item % specs.size()];
            try {
                TransformedImage t = detail::cached_transform(rc, ci, spec);
                Preprocessed pre = preprocess(t.image, rc.pipeline);
                auto& slot = slots[item];
                for (size_t d = 0; d < rc.detectors.size(); ++d) {
                    Method m = rc.detectors[d];
                    auto test = detect_on_curves(pre.curves, pre.junctions, m,
                                                 rc.pipeline.detector);
                    MatchResult match =
                        match_corners(ci.corners[d], test, t.forward_map,
                                      rc.matching_radius);
                    EvalRecord rec;
                    rec.image = ci.stem;
                    rec.detector = m;
                    rec.spec = spec;
                    rec.repeated = match.repeated;
                    rec.original_count = match.original_count;
                    rec.test_count = match.test_count;
                    rec.repeatability = average_repeatability(match);
                    rec.localization = localization_error(match, t.forward_map);
                    slot.push_back(std::move(rec));
                }
            } catch (const std::exception& e) {
                skipped.fetch_add(1);
                logln("skip " + ci.stem + "/" + param_string(spec) + ": " +
                      e.what());
            }
            size_t d = done.fetch_add(1) + 1;
            if (d % 1000 == 0)
                logln("processed " + std::to_string(d) + "/" +
                      std::to_string(total) + " work items");
        }
    };

    if (rc.jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < rc.jobs; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    result.skipped += skipped.load();

    for (auto& slot : slots)
        for (auto& rec : slot) result.records.push_back(std::move(rec));
    if (result.records.empty())
        throw Error("benchmark produced no records");
    result.summary = aggregate(result.records);

    if (rc.write_reports) {
        std::filesystem::create_directories(rc.out_dir);
        write_records_csv(rc.out_dir / "records.csv", result.records);
        write_summary_csv(rc.out_dir / "summary.csv", result.summary);
        {
            std::ofstream warn(rc.out_dir / "warnings.txt");
            for (const auto& w : result.warnings) warn << w << "\n";
        }

        std::vector<std::string> fams;
        for (Family f : kAllFamilies)
            if (!rc.family || *rc.family == f) fams.push_back(family_name(f));

        BarChart rep, loc;
        rep.title = "Average repeatability by transformation";
        rep.y_label = "average repeatability (%)";
        rep.y_max = 100.0;
        loc.title = "Localization error by transformation";
        loc.y_label = "localization error (px)";
        rep.groups = fams;
        rep.groups.push_back("average");
        loc.groups = rep.groups;
        for (Method m : rc.detectors) {
            rep.series.push_back(method_name(m));
            loc.series.push_back(method_name(m));
        }
        auto cell = [&](const std::string& det, const std::string& fam,
                        bool repeat) {
            auto dit = result.summary.detectors.find(det);
            if (dit == result.summary.detectors.end()) return kUndefined;
            if (fam == "average") {
                auto v = repeat ? dit->second.mean_repeatability_records
                                : dit->second.mean_localization_records;
                return v ? *v : kUndefined;
            }
            auto fit = dit->second.per_family.find(fam);
            if (fit == dit->second.per_family.end()) return kUndefined;
            auto v = repeat ? fit->second.mean_repeatability
                            : fit->second.mean_localization;
            return v ? *v : kUndefined;
        };
        for (const std::string& fam : rep.groups) {
            std::vector<double> r, l;
            for (Method m : rc.detectors) {
                r.push_back(cell(method_name(m), fam, true));
                l.push_back(cell(method_name(m), fam, false));
            }
            rep.values.push_back(r);
            loc.values.push_back(l);
        }
        write_bar_chart_svg(rc.out_dir / "repeatability.svg", rep);
        write_bar_chart_svg(rc.out_dir / "localization_error.svg", loc);
    }
    return result;
}

struct SweepRow {
    int l = 0;
    double threshold = 0.0;
    int records = 0;
    std::optional<double> mean_repeatability;
    std::optional<double> mean_localization;
};

// Parameter-grid study of the tangent-deviation detector: one bench run per
// (l, threshold) cell, all sharing the same transformed-image cache.
inline std::vector<SweepRow> run_sweep(const RunConfig& base,
                                       const std::vector<int>& l_values,
                                       const std::vector<double>& thresholds,
                                       std::ostream* log = nullptr) {
    if (l_values.empty() || thresholds.empty())
        throw std::invalid_argument("sweep grid is empty");
    std::vector<SweepRow> rows;
    for (int l : l_values)
        for (double thr : thresholds) {
            RunConfig rc = base;
            rc.detectors = {Method::cadt};
            rc.pipeline.detector.cadt_l = l;
            rc.pipeline.detector.cadt_threshold = thr;
            rc.write_reports = false;
            if (log)
                (*log) << "sweep l=" << l << " threshold=" << thr << "\n";
            BenchResult r = run_bench(rc, log);
            SweepRow row;
            row.l = l;
            row.threshold = thr;
            const auto& ds = r.summary.detectors.at(method_name(Method::cadt));
            row.records = ds.records;
            row.mean_repeatability = ds.mean_repeatability_records;
            row.mean_localization = ds.mean_localization_records;
            rows.push_back(row);
        }
    return rows;
}

inline void write_sweep_csv(std::ostream& out,
                            const std::vector<SweepRow>& rows) {
    out << "l,threshold,mean_repeatability,mean_localization_error,records\n";
    char buf[64];
    for (const SweepRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%.4f,", r.l, r.threshold);
        out << buf;
        if (r.mean_repeatability) {
            std::snprintf(buf, sizeof buf, "%.6f", *r.mean_repeatability);
            out << buf;
        } else {
            out << "NA";
        }
        out << ',';
        if (r.mean_localization) {
            std::snprintf(buf, sizeof buf, "%.6f", *r.mean_localization);
            out << buf;
        } else {
            out << "NA";
        }
        out << ',' << r.records << '\n';
    }
}

inline void write_sweep_csv(const std::filesystem::path& path,
                            const std::vector<SweepRow>& rows) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    write_sweep_csv(out, rows);
    out.flush();
    if (!out)
        throw IoError("write failed: " + path.string());
}

}  // namespace cadt
