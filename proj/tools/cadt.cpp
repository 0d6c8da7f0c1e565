// Command-line front end: single-image detection, the transformation-suite
// benchmark, a parameter sweep for the tangent-deviation detector, and the
// synthetic corpus generator.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <cadt/cadt.hpp>

namespace fs = std::filesystem;

namespace {

std::vector<cadt::Method> parse_detectors(const std::string& list) {
    std::vector<cadt::Method> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto m = cadt::method_from_name(item);
        if (!m)
            throw std::invalid_argument("unknown detector '" + item + "'");
        out.push_back(*m);
    }
    if (out.empty())
        throw std::invalid_argument("empty detector list");
    return out;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("CADT_SEED")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (!end || *end != '\0' || end == env)
            throw std::invalid_argument("CADT_SEED is not a valid integer");
        return v;
    }
    return 0;
}

std::optional<cadt::Family> resolve_family(const std::string& name) {
    if (name.empty()) return std::nullopt;
    auto f = cadt::family_from_name(name);
    if (!f)
        throw std::invalid_argument("unknown transform family '" + name + "'");
    return f;
}

struct DetectArgs {
    std::string image;
    std::string method;
    std::string out;
    std::string dump_curves;
    std::string config;
    bool overlay = false;
};

int cmd_detect(const DetectArgs& args) {
    auto method = cadt::method_from_name(args.method);
    if (!method)
        throw std::invalid_argument("unknown method '" + args.method + "'");
    cadt::PipelineConfig cfg;
    if (!args.config.empty()) cadt::load_config_file(args.config, cfg);
    cfg.detector.validate();

    cadt::GrayImage img = cadt::load_image(args.image);
    cadt::EdgeMap edges = cadt::detect_edges(img, cfg.canny);
    cadt::CurveSet cs = cadt::extract_curves(edges, cfg.min_curve_length);
    if (!args.dump_curves.empty()) {
        std::ofstream dump(args.dump_curves);
        if (!dump)
            throw cadt::IoError("cannot open " + args.dump_curves +
                                " for writing");
        cadt::write_curves(dump, cs.curves);
    }
    std::vector<cadt::SmoothedCurve> curves;
    for (const auto& c : cs.curves)
        curves.push_back(cadt::smooth_curve(c, cfg.curve_sigma));
    auto corners =
        cadt::detect_on_curves(curves, cs.junctions, *method, cfg.detector);

    fs::path out = args.out.empty()
                       ? fs::path(fs::path(args.image).stem().string() +
                                  ".corners.txt")
                       : fs::path(args.out);
    cadt::write_corners(out, corners, *method);
    std::cout << corners.size() << " corners (" << args.method << ") -> "
              << out.string() << "\n";
    if (args.overlay) {
        fs::path overlay_path =
            out.parent_path() /
            (fs::path(args.image).stem().string() + ".overlay.png");
        cadt::save_image(cadt::overlay_corners(img, corners), overlay_path);
        std::cout << "overlay -> " << overlay_path.string() << "\n";
    }
    return 0;
}

struct BenchArgs {
    std::string corpus;
    std::string out;
    std::string family;
    std::string detectors = "cpda,ctar,ctaa,cadt";
    std::string config;
    std::optional<std::uint64_t> seed;
    int jobs = 1;
};

void print_summary(const cadt::BenchResult& result) {
    std::printf("%-6s %14s %18s %10s %9s %9s\n", "det", "repeatability",
                "repeatability(fam)", "loc.error", "corners", "records");
    for (const auto& [det, ds] : result.summary.detectors) {
        auto s = [](const std::optional<double>& v) {
            char buf[32];
            if (!v) return std::string("NA");
            std::snprintf(buf, sizeof buf, "%.2f", *v);
            return std::string(buf);
        };
        std::printf("%-6s %14s %18s %10s %9ld %9d\n", det.c_str(),
                    s(ds.mean_repeatability_records).c_str(),
                    s(ds.mean_repeatability_families).c_str(),
                    s(ds.mean_localization_records).c_str(), ds.corner_count,
                    ds.records);
    }
    for (const auto& w : result.warnings)
        std::cout << "warning: " << w << "\n";
    if (result.skipped > 0)
        std::cout << result.skipped << " work item(s) skipped\n";
}

int cmd_bench(const BenchArgs& args) {
    cadt::RunConfig rc;
    rc.corpus_dir = args.corpus;
    rc.out_dir = args.out;
    rc.family = resolve_family(args.family);
    rc.detectors = parse_detectors(args.detectors);
    rc.seed = resolve_seed(args.seed);
    rc.jobs = args.jobs;
    if (!args.config.empty())
        cadt::load_config_file(args.config, rc.pipeline, &rc.matching_radius);
    cadt::BenchResult result = cadt::run_bench(rc, &std::cerr);
    print_summary(result);
    std::cout << "reports in " << rc.out_dir.string() << "\n";
    return 0;
}

struct SweepArgs {
    std::string corpus;
    std::string out = "sweep-out";
    std::string family;
    std::string config;
    std::vector<int> l_values;
    std::vector<double> thresholds;
    std::optional<std::uint64_t> seed;
    int jobs = 1;
};

int cmd_sweep(const SweepArgs& args) {
    cadt::RunConfig rc;
    rc.corpus_dir = args.corpus;
    rc.out_dir = args.out;
    rc.family = resolve_family(args.family);
    rc.seed = resolve_seed(args.seed);
    rc.jobs = args.jobs;
    if (!args.config.empty())
        cadt::load_config_file(args.config, rc.pipeline, &rc.matching_radius);
    auto rows = cadt::run_sweep(rc, args.l_values, args.thresholds, &std::cerr);
    fs::create_directories(args.out);
    fs::path csv = fs::path(args.out) / "sweep.csv";
    cadt::write_sweep_csv(csv, rows);
    std::printf("%4s %10s %14s %10s\n", "l", "threshold", "repeatability",
                "loc.error");
    for (const auto& r : rows) {
        auto s = [](const std::optional<double>& v) {
            char buf[32];
            if (!v) return std::string("NA");
            std::snprintf(buf, sizeof buf, "%.2f", *v);
            return std::string(buf);
        };
        std::printf("%4d %10.4f %14s %10s\n", r.l, r.threshold,
                    s(r.mean_repeatability).c_str(),
                    s(r.mean_localization).c_str());
    }
    std::cout << "sweep table -> " << csv.string() << "\n";
    return 0;
}

struct SynthArgs {
    std::string out;
    int count = 20;
};

int cmd_synth(const SynthArgs& args) {
    auto shapes = cadt::synth_corpus(args.count);
    cadt::write_corpus(args.out, shapes);
    std::cout << shapes.size() << " images -> " << args.out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"contour corner detection with chord-based curvature "
                 "estimators, plus a repeatability benchmark"};
    app.require_subcommand(1);

    DetectArgs detect_args;
    auto* detect_cmd =
        app.add_subcommand("detect", "detect corners in one image");
    detect_cmd->add_option("image", detect_args.image, "input image (PGM or PNG)")
        ->required();
    detect_cmd
        ->add_option("--method", detect_args.method,
                     "detector: cpda, ctar, ctaa, or cadt")
        ->required();
    detect_cmd->add_option("--out", detect_args.out,
                           "corner list path (default: <stem>.corners.txt)");
    detect_cmd->add_flag("--overlay", detect_args.overlay,
                         "also write <stem>.overlay.png with markers");
    detect_cmd->add_option("--dump-curves", detect_args.dump_curves,
                           "write extracted curves as text");
    detect_cmd->add_option("--config", detect_args.config,
                           "key = value settings file");

    BenchArgs bench_args;
    auto* bench_cmd = app.add_subcommand(
        "bench", "run the transformation-suite benchmark over a corpus");
    bench_cmd->add_option("--corpus", bench_args.corpus, "corpus directory")
        ->required();
    bench_cmd->add_option("--out", bench_args.out, "output directory")
        ->required();
    bench_cmd->add_option("--family", bench_args.family,
                          "restrict to one transform family");
    bench_cmd->add_option("--detectors", bench_args.detectors,
                          "comma-separated detector list");
    bench_cmd->add_option("--seed", bench_args.seed,
                          "run seed (default: CADT_SEED or 0)");
    bench_cmd->add_option("--jobs", bench_args.jobs, "worker threads");
    bench_cmd->add_option("--config", bench_args.config,
                          "key = value settings file");

    SweepArgs sweep_args;
    auto* sweep_cmd = app.add_subcommand(
        "sweep", "grid study of the cadt detector parameters");
    sweep_cmd->add_option("--corpus", sweep_args.corpus, "corpus directory")
        ->required();
    sweep_cmd->add_option("--l", sweep_args.l_values, "half-chord values")
        ->required()
        ->delimiter(',');
    sweep_cmd
        ->add_option("--threshold", sweep_args.thresholds,
                     "angle thresholds in degrees")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--out", sweep_args.out,
                          "output directory (default: sweep-out)");
    sweep_cmd->add_option("--family", sweep_args.family,
                          "restrict to one transform family");
    sweep_cmd->add_option("--seed", sweep_args.seed,
                          "run seed (default: CADT_SEED or 0)");
    sweep_cmd->add_option("--jobs", sweep_args.jobs, "worker threads");
    sweep_cmd->add_option("--config", sweep_args.config,
                          "key = value settings file");

    SynthArgs synth_args;
    auto* synth_cmd = app.add_subcommand(
        "synth", "generate the synthetic shape corpus with known corners");
    synth_cmd->add_option("--out", synth_args.out, "output directory")
        ->required();
    synth_cmd->add_option("--count", synth_args.count, "number of images");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (detect_cmd->parsed()) return cmd_detect(detect_args);
        if (bench_cmd->parsed()) return cmd_bench(bench_args);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_args);
        if (synth_cmd->parsed()) return cmd_synth(synth_args);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
