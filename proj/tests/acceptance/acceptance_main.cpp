// Acceptance gate for the library: ten end-to-end checks, one PASS/FAIL
// line each, process exit code = number of failures. Run via ctest as the
// "acceptance" test or directly from the build tree.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <cadt/cadt.hpp>

namespace fs = std::filesystem;
using namespace cadt;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Gate {
    int failures = 0;

    void report(int num, const char* what, bool ok, const std::string& detail) {
        std::printf("%s  %2d. %s", ok ? "PASS" : "FAIL", num, what);
        if (!detail.empty()) std::printf("  [%s]", detail.c_str());
        std::printf("\n");
        std::fflush(stdout);
        if (!ok) ++failures;
    }

    template <typename Fn>
    void run(int num, const char* what, Fn&& fn) {
        std::string detail;
        bool ok = false;
        try {
            ok = fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        report(num, what, ok, detail);
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return {};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args, const fs::path& log) {
    std::string cmd = std::string(CADT_CLI_PATH) + " " + args + " > " +
                      log.string() + " 2>&1";
    int status = std::system(cmd.c_str());
    if (status == -1 || !WIFEXITED(status)) return -1;
    return WEXITSTATUS(status);
}

constexpr long double kPiL = 3.141592653589793238462643383279502884L;

// Angle at the vertex joining sides of length a and b, opposite side c,
// evaluated with Kahan's cancellation-safe triangle formula. Stays accurate
// for needle-thin triangles where the direct law-of-cosines acos loses half
// its digits.
long double stable_vertex_angle_deg(long double a, long double b,
                                    long double c) {
    if (a < b) std::swap(a, b);
    long double mu;
    if (b >= c)
        mu = c - (a - b);
    else
        mu = b - (a - c);
    if (mu < 0.0L) mu = 0.0L;  // degenerate input rounded past zero
    long double den2 = (a + (b + c)) * ((a - c) + b);
    if (den2 < 0.0L) den2 = 0.0L;  // triangle inequality rounded past zero
    long double num = sqrtl(((a - b) + c) * mu);
    return 2.0L * atan2l(num, sqrtl(den2)) * (180.0L / kPiL);
}

// --- 1. angle kernels vs independent oracles --------------------------------

bool check_angle_oracles(std::string& detail) {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> U(-100.0, 100.0);

    long double worst_dev = 0.0L, worst_int = 0.0L, worst_gap = 0.0L;
    for (int i = 0; i < 100000; ++i) {
        Vec2 p{U(rng), U(rng)}, q{U(rng), U(rng)}, r{U(rng), U(rng)};
        const double dev = tangent_deviation_deg(p, q, r);
        const double interior = interior_angle_deg(p, q, r);

        // oracle A: fold the two half-chord direction angles to [0, 90]
        long double a1 = atan2l((long double)(q.y) - p.y,
                                (long double)(q.x) - p.x);
        long double a2 = atan2l((long double)(r.y) - q.y,
                                (long double)(r.x) - q.x);
        long double d = fabsl(a1 - a2) * (180.0L / kPiL);
        if (d > 180.0L) d = 360.0L - d;
        if (d > 90.0L) d = 180.0L - d;
        worst_dev = std::max(worst_dev, fabsl((long double)dev - (180.0L - d)));

        // oracle B: interior angle from the three side lengths
        long double arm1 = hypotl((long double)(p.x) - q.x,
                                  (long double)(p.y) - q.y);
        long double arm2 = hypotl((long double)(r.x) - q.x,
                                  (long double)(r.y) - q.y);
        long double opp = hypotl((long double)(p.x) - r.x,
                                 (long double)(p.y) - r.y);
        long double want = stable_vertex_angle_deg(arm1, arm2, opp);
        worst_int = std::max(worst_int, fabsl((long double)interior - want));

        // obtuse interiors: both kernels measure the same angle
        if (interior >= 90.0)
            worst_gap =
                std::max(worst_gap, fabsl((long double)dev - interior));
    }
    const double secs = seconds_since(t0);

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "max err: deviation %.2Le, interior %.2Le, obtuse gap "
                  "%.2Le deg; %.2fs",
                  worst_dev, worst_int, worst_gap, secs);
    detail = buf;
    return worst_dev <= 1e-9L && worst_int <= 1e-9L && worst_gap <= 1e-9L &&
           secs < 5.0;
}

// --- 2. collinear invariants -------------------------------------------------

bool check_collinear_invariants(std::string& detail) {
    std::mt19937_64 rng(202);
    std::uniform_int_distribution<int> base(-100, 100);
    std::uniform_int_distribution<int> comp(-9, 9);
    std::uniform_int_distribution<int> steps(1, 5);

    double worst_dev = 0.0, worst_int = 0.0, worst_ratio = 0.0,
           worst_accum = 0.0;
    for (int i = 0; i < 10000; ++i) {
        int dx = 0, dy = 0;
        while (dx == 0 && dy == 0) {
            dx = comp(rng);
            dy = comp(rng);
        }
        const double px = base(rng), py = base(rng);
        const int k = steps(rng), m = steps(rng);
        const Vec2 prev{px - k * dx, py - k * dy};
        const Vec2 mid{px, py};
        const Vec2 next{px + m * dx, py + m * dy};

        worst_dev = std::max(
            worst_dev, std::abs(tangent_deviation_deg(prev, mid, next) - 180.0));
        worst_int = std::max(
            worst_int, std::abs(interior_angle_deg(prev, mid, next) - 180.0));
        worst_ratio = std::max(
            worst_ratio, std::abs(triangle_arm_ratio(prev, mid, next) - 1.0));

        // accumulated chord distance along an equally spaced collinear run
        SmoothedCurve line;
        line.closed = false;
        for (int t = 0; t < 25; ++t)
            line.points.push_back({px + t * double(dx), py + t * double(dy)});
        CurvatureProfile h = cpda_curvature(line, 10);
        for (double v : h.values)
            if (!std::isnan(v)) worst_accum = std::max(worst_accum, std::abs(v));
    }

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "max err: deviation %.2e, interior %.2e, ratio %.2e, "
                  "accumulation %.2e",
                  worst_dev, worst_int, worst_ratio, worst_accum);
    detail = buf;
    return worst_dev <= 1e-9 && worst_int <= 1e-9 && worst_ratio <= 1e-9 &&
           worst_accum <= 1e-9;
}

// --- 3. similarity invariance ------------------------------------------------

bool check_similarity_invariance(std::string& detail) {
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> U(-100.0, 100.0);
    std::uniform_real_distribution<double> Uang(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> Ulog(std::log(0.1), std::log(10.0));
    std::uniform_real_distribution<double> Ut(-50.0, 50.0);

    double worst_inv = 0.0, worst_rel = 0.0;
    for (int i = 0; i < 1000; ++i) {
        Vec2 p, q, r;
        do {
            p = {U(rng), U(rng)};
            q = {U(rng), U(rng)};
            r = {U(rng), U(rng)};
        } while (distance(p, q) < 5.0 || distance(r, q) < 5.0);

        const double s = std::exp(Ulog(rng));
        const double ang = Uang(rng);
        const double co = std::cos(ang), si = std::sin(ang);
        const double tx = Ut(rng), ty = Ut(rng);
        auto T = [&](Vec2 v) -> Vec2 {
            return {s * (co * v.x - si * v.y) + tx,
                    s * (si * v.x + co * v.y) + ty};
        };

        worst_inv = std::max(
            worst_inv, std::abs(triangle_arm_ratio(T(p), T(q), T(r)) -
                                triangle_arm_ratio(p, q, r)));
        worst_inv = std::max(
            worst_inv, std::abs(interior_angle_deg(T(p), T(q), T(r)) -
                                interior_angle_deg(p, q, r)));
        worst_inv = std::max(
            worst_inv, std::abs(tangent_deviation_deg(T(p), T(q), T(r)) -
                                tangent_deviation_deg(p, q, r)));

        // the accumulated distance is length-like: it must scale by s
        SmoothedCurve curve, mapped;
        curve.closed = mapped.closed = false;
        double h = 0.0;
        while (!(h > 1.0)) {
            curve.points.clear();
            for (int t = 0; t < 21; ++t)
                curve.points.push_back({U(rng), U(rng)});
            h = cpda_curvature(curve, 10).values[10];
        }
        for (Vec2 v : curve.points) mapped.points.push_back(T(v));
        const double h2 = cpda_curvature(mapped, 10).values[10];
        worst_rel = std::max(worst_rel, std::abs(h2 - s * h) / (s * h));
    }

    char buf[120];
    std::snprintf(buf, sizeof buf,
                  "max err: invariance %.2e, accumulation scaling %.2e rel",
                  worst_inv, worst_rel);
    detail = buf;
    return worst_inv <= 1e-9 && worst_rel <= 1e-9;
}

// --- 4. hand-evaluated metric oracles ---------------------------------------

bool check_metric_oracles(std::string& detail) {
    MatchResult partial;
    partial.repeated = 5;
    partial.original_count = 10;
    partial.test_count = 20;
    const double rep = average_repeatability(partial).value_or(-1.0);

    MatchResult perfect;
    perfect.repeated = 7;
    perfect.original_count = 7;
    perfect.test_count = 7;
    const double full = average_repeatability(perfect).value_or(-1.0);

    MatchResult offset;
    offset.pairs = {{Vec2{0.0, 0.0}, Vec2{1.0, 2.0}}};
    const double loc =
        localization_error(offset, Affine::identity()).value_or(-1.0);

    char buf[120];
    std::snprintf(buf, sizeof buf, "repeatability %.17g / %.17g, rmse %.17g",
                  rep, full, loc);
    detail = buf;
    return std::abs(rep - 37.5) <= 1e-12 && std::abs(full - 100.0) <= 1e-12 &&
           std::abs(loc - std::sqrt(5.0)) <= 1e-12;
}

// --- 5. ground-truth vertex recovery ----------------------------------------

std::vector<SynthShape> vertex_corpus() {
    std::vector<SynthShape> shapes;
    for (int i = 0; i < 10; ++i)
        shapes.push_back(make_square("sq" + std::to_string(i),
                                     {118.0 + 2.0 * i, 122.0 + 1.5 * i},
                                     46.0 + 1.8 * i, 7.0 * i));
    for (int i = 0; i < 9; ++i)
        shapes.push_back(make_rectangle("re" + std::to_string(i),
                                        {126.0 + 1.0 * i, 124.0 + 1.2 * i},
                                        34.0 + 1.5 * i, 55.0 + 2.0 * i,
                                        5.0 + 11.0 * i));
    shapes.push_back(make_star("star", {128.0, 128.0}, 88.0, 18.0));
    return shapes;
}

bool check_vertex_recovery(std::string& detail) {
    const auto t0 = Clock::now();
    const std::vector<SynthShape> shapes = vertex_corpus();

    PipelineConfig cfg;
    cfg.curve_sigma = 1.2;  // crisp rasters need little curve smoothing

    int total_vertices = 0;
    int hits[4] = {0, 0, 0, 0};
    int worst_excess = 0;  // spurious cadt corners beyond the vertex count
    for (const SynthShape& shape : shapes) {
        const Preprocessed pre = preprocess(shape.image, cfg);
        total_vertices += int(shape.vertices.size());
        for (int mi = 0; mi < 4; ++mi) {
            const auto corners = detect_on_curves(pre.curves, pre.junctions,
                                                  kAllMethods[mi], cfg.detector);
            for (Vec2 v : shape.vertices) {
                bool hit = false;
                for (const Corner& c : corners)
                    if (std::hypot(c.x - v.x, c.y - v.y) <= 3.0) {
                        hit = true;
                        break;
                    }
                hits[mi] += hit ? 1 : 0;
            }
            if (kAllMethods[mi] == Method::cadt)
                worst_excess = std::max(
                    worst_excess,
                    int(corners.size()) - int(shape.vertices.size()));
        }
    }
    const double secs = seconds_since(t0);

    bool ok = secs < 10.0 && worst_excess <= 2;
    for (int mi = 0; mi < 4; ++mi)
        if (hits[mi] * 10 < total_vertices * 9) ok = false;

    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "hit %d/%d/%d/%d of %d vertices (cpda/ctar/ctaa/cadt), "
                  "max cadt excess %d, %.2fs",
                  hits[0], hits[1], hits[2], hits[3], total_vertices,
                  worst_excess, secs);
    detail = buf;
    return ok;
}

// --- 6. transformation-suite cardinality -------------------------------------

bool check_suite_cardinality(std::string& detail) {
    const size_t shear = enumerate_suite(Family::shearing).size();
    const size_t nonuni = enumerate_suite(Family::nonuniform_scale).size();
    const size_t jpeg = enumerate_suite(Family::jpeg).size();
    const size_t noise = enumerate_suite(Family::gaussian_noise).size();
    const size_t rot = enumerate_suite(Family::rotation).size();

    bool warned = false;
    for (const std::string& w : suite_warnings())
        if (w.find("rotation") != std::string::npos &&
            w.find("18") != std::string::npos &&
            w.find("19") != std::string::npos)
            warned = true;

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "shearing %zu, nonuniform %zu, jpeg %zu, noise %zu, "
                  "rotation %zu (%s)",
                  shear, nonuni, jpeg, noise, rot,
                  warned ? "ambiguity warned" : "warning missing");
    detail = buf;
    return shear == 47 && nonuni == 77 && jpeg == 20 && noise == 10 &&
           rot == 18 && warned;
}

// --- 7/8. full-suite benchmark on the bundled synthetic corpus ---------------

struct BenchOutcome {
    BenchResult result;
    double seconds = 0.0;
};

std::optional<BenchOutcome> run_full_bench(const fs::path& corpus,
                                           const fs::path& out) {
    try {
        RunConfig rc;
        rc.corpus_dir = corpus;
        rc.out_dir = out;
        rc.jobs = 4;
        rc.seed = 0;
        const auto t0 = Clock::now();
        BenchOutcome outcome;
        outcome.result = run_bench(rc);
        outcome.seconds = seconds_since(t0);
        return outcome;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

bool check_repeatability_band(const std::optional<BenchOutcome>& run,
                              std::string& detail) {
    if (!run) {
        detail = "benchmark run unavailable";
        return false;
    }
    const Summary& s = run->result.summary;
    double rep[4] = {0, 0, 0, 0};
    long corners[4] = {0, 0, 0, 0};
    for (int mi = 0; mi < 4; ++mi) {
        const auto& ds = s.detectors.at(method_name(kAllMethods[mi]));
        rep[mi] = ds.mean_repeatability_records.value_or(-1.0);
        corners[mi] = ds.corner_count;
    }
    // order: cpda, ctar, ctaa, cadt
    bool ok = run->seconds < 900.0 && run->result.skipped == 0;
    for (double v : rep)
        if (!(v >= 60.0 && v <= 100.0)) ok = false;
    if (!(rep[3] >= rep[2] - 3.0)) ok = false;
    for (int mi = 1; mi < 4; ++mi)
        if (!(corners[0] < corners[mi])) ok = false;

    char buf[220];
    std::snprintf(buf, sizeof buf,
                  "repeatability cpda %.2f ctar %.2f ctaa %.2f cadt %.2f; "
                  "corners %ld/%ld/%ld/%ld; %.0fs",
                  rep[0], rep[1], rep[2], rep[3], corners[0], corners[1],
                  corners[2], corners[3], run->seconds);
    detail = buf;
    return ok;
}

bool check_localization_bound(const std::optional<BenchOutcome>& run,
                              std::string& detail) {
    if (!run) {
        detail = "benchmark run unavailable";
        return false;
    }
    double worst = 0.0;
    int defined = 0;
    for (const EvalRecord& r : run->result.records)
        if (r.localization) {
            worst = std::max(worst, *r.localization);
            ++defined;
        }
    const auto& cadt_ds = run->result.summary.detectors.at("cadt");
    const double agg = cadt_ds.mean_localization_records.value_or(-1.0);

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "max %.4f px over %d defined records, cadt aggregate %.4f",
                  worst, defined, agg);
    detail = buf;
    return defined > 0 && worst <= 3.0 + 1e-9 && agg >= 0.5 && agg <= 3.0;
}

// --- 9. root-free angle kernel ------------------------------------------------

bool check_root_free_source(std::string& detail) {
    const fs::path src =
        fs::path(CADT_SOURCE_DIR) / "include" / "cadt" / "tangent_deviation.hpp";
    const std::string body = slurp(src);
    if (body.empty()) {
        detail = "cannot read " + src.string();
        return false;
    }
    std::string found;
    for (const char* needle : {"sqrt", "hypot", "pow", "cbrt"})
        if (body.find(needle) != std::string::npos) found += std::string(needle) + " ";
    detail = found.empty() ? "no root or power calls in " +
                                 src.filename().string()
                           : "found: " + found;
    return found.empty();
}

// --- 10. serial/parallel equivalence ------------------------------------------

bool check_parallel_equivalence(const fs::path& corpus, const fs::path& scratch,
                                std::string& detail) {
    const fs::path o1 = scratch / "jobs1";
    const fs::path o2 = scratch / "jobs8";
    const fs::path log = scratch / "cli.log";
    const std::string common =
        "bench --corpus " + corpus.string() + " --seed 9 ";
    if (run_cli(common + "--out " + o1.string() + " --jobs 1", log) != 0) {
        detail = "serial benchmark run failed";
        return false;
    }
    if (run_cli(common + "--out " + o2.string() + " --jobs 8", log) != 0) {
        detail = "parallel benchmark run failed";
        return false;
    }
    const std::string rec1 = slurp(o1 / "records.csv");
    const std::string rec2 = slurp(o2 / "records.csv");
    const std::string sum1 = slurp(o1 / "summary.csv");
    const std::string sum2 = slurp(o2 / "summary.csv");

    char buf[120];
    std::snprintf(buf, sizeof buf, "records.csv %zu bytes, summary.csv %zu bytes",
                  rec1.size(), sum1.size());
    detail = buf;
    return !rec1.empty() && !sum1.empty() && rec1 == rec2 && sum1 == sum2;
}

}  // namespace

int main() {
    std::printf("acceptance checks: chord-curvature corner detection\n");
    Gate gate;

    std::mt19937_64 seed_rng(std::random_device{}());
    const fs::path scratch =
        fs::temp_directory_path() /
        ("cadt-acceptance-" + std::to_string(seed_rng()));
    fs::create_directories(scratch);

    gate.run(1, "angle kernels match independent long-double oracles",
             check_angle_oracles);
    gate.run(2, "collinear points read as straight for every measure",
             check_collinear_invariants);
    gate.run(3, "similarity transforms preserve angles and scale distances",
             check_similarity_invariance);
    gate.run(4, "repeatability and localization match hand-worked values",
             check_metric_oracles);
    gate.run(5, "analytic polygon vertices are recovered within 3 px",
             check_vertex_recovery);
    gate.run(6, "transformation suite counts and rotation-count warning",
             check_suite_cardinality);

    const fs::path corpus_dir = scratch / "corpus";
    std::optional<BenchOutcome> full;
    try {
        write_corpus(corpus_dir, synth_corpus(20));
        full = run_full_bench(corpus_dir, scratch / "bench");
    } catch (const std::exception& e) {
        std::printf("  (benchmark setup failed: %s)\n", e.what());
    }

    gate.run(7, "benchmark repeatability lands in the expected band",
             [&](std::string& d) { return check_repeatability_band(full, d); });
    gate.run(8, "localization errors stay within the matching radius",
             [&](std::string& d) { return check_localization_bound(full, d); });
    gate.run(9, "tangent-deviation kernel avoids root and power calls",
             check_root_free_source);
    gate.run(10, "serial and 8-way benchmark runs emit identical csv",
             [&](std::string& d) {
                 return check_parallel_equivalence(corpus_dir, scratch, d);
             });

    std::error_code ec;
    fs::remove_all(scratch, ec);

    std::printf("%d of 10 criteria failed\n", gate.failures);
    return gate.failures;
}
