#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "detect.hpp"
#include "geometry.hpp"
#include "transform.hpp"
#include "types.hpp"

namespace cadt {

// Greedy one-to-one assignment between original-image corners (mapped
// through the transform) and corners found in the transformed image.
struct MatchResult {
    // (original corner in source coordinates, matched test corner)
    std::vector<std::pair<Vec2, Vec2>> pairs;
    int repeated = 0;        // matched pairs
    int original_count = 0;  // corners detected in the original image
    int test_count = 0;      // corners detected in the transformed image
};

// Pairs each original corner with at most one test corner no farther than
// radius pixels from its mapped position, closest pairs first. Ties are
// broken on coordinates, never on list order, so shuffled inputs match
// identically.
inline MatchResult match_corners(const std::vector<Corner>& original,
                                 const std::vector<Corner>& test,
                                 const Affine& forward, double radius = 3.0) {
    if (radius < 0.0)
        throw std::invalid_argument("match radius must be >= 0");
    MatchResult out;
    out.original_count = int(original.size());
    out.test_count = int(test.size());

    struct Cand {
        double dist;
        Vec2 mapped, test_pos, raw;
        int oi, ti;
    };
    std::vector<Cand> cands;
    for (int oi = 0; oi < int(original.size()); ++oi) {
        Vec2 raw{original[size_t(oi)].x, original[size_t(oi)].y};
        Vec2 mapped = forward(raw);
        for (int ti = 0; ti < int(test.size()); ++ti) {
            Vec2 tp{test[size_t(ti)].x, test[size_t(ti)].y};
            double d = distance(mapped, tp);
            if (d <= radius) cands.push_back({d, mapped, tp, raw, oi, ti});
        }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.mapped.x != b.mapped.x) return a.mapped.x < b.mapped.x;
        if (a.mapped.y != b.mapped.y) return a.mapped.y < b.mapped.y;
        if (a.test_pos.x != b.test_pos.x) return a.test_pos.x < b.test_pos.x;
        return a.test_pos.y < b.test_pos.y;
    });
    std::vector<char> o_used(original.size(), 0), t_used(test.size(), 0);
    for (const Cand& c : cands) {
        if (o_used[size_t(c.oi)] || t_used[size_t(c.ti)]) continue;
        o_used[size_t(c.oi)] = 1;
        t_used[size_t(c.ti)] = 1;
        out.pairs.emplace_back(c.raw, c.test_pos);
    }
    out.repeated = int(out.pairs.size());
    return out;
}

// Mean of the repeated fraction measured against both corner sets, as a
// percentage. Undefined when either set is empty.
inline std::optional<double> average_repeatability(const MatchResult& r) {
    if (r.original_count <= 0 || r.test_count <= 0) return std::nullopt;
    double a = double(r.repeated);
    return 100.0 * (a / r.original_count + a / r.test_count) / 2.0;
}

// Root-mean-square distance between mapped original corners and their
// matched test corners. Undefined without any matched pair.
inline std::optional<double> localization_error(const MatchResult& r,
                                                const Affine& forward) {
    if (r.pairs.empty()) return std::nullopt;
    double sum2 = 0.0;
    for (const auto& [orig, test] : r.pairs) {
        Vec2 d = forward(orig) - test;
        sum2 += dot(d, d);
    }
    return std::sqrt(sum2 / double(r.pairs.size()));
}

// One benchmark measurement: an (image, detector, transform) cell.
struct EvalRecord {
    std::string image;  // corpus file stem
    Method detector = Method::cadt;
    TransformSpec spec;
    int repeated = 0;
    int original_count = 0;
    int test_count = 0;
    std::optional<double> repeatability;
    std::optional<double> localization;
};

inline void write_records_csv(std::ostream& out,
                              const std::vector<EvalRecord>& records) {
    out << "image,detector,family,params,A_p,B_q,C_r,repeatability,"
           "localization_error\n";
    char buf[64];
    for (const EvalRecord& r : records) {
        out << r.image << ',' << method_name(r.detector) << ','
            << family_name(r.spec.family) << ',' << param_string(r.spec) << ','
            << r.repeated << ',' << r.original_count << ',' << r.test_count
            << ',';
        if (r.repeatability) {
            std::snprintf(buf, sizeof buf, "%.6f", *r.repeatability);
            out << buf;
        } else {
            out << "NA";
        }
        out << ',';
        if (r.localization) {
            std::snprintf(buf, sizeof buf, "%.6f", *r.localization);
            out << buf;
        } else {
            out << "NA";
        }
        out << '\n';
    }
}

inline void write_records_csv(const std::filesystem::path& path,
                              const std::vector<EvalRecord>& records) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    write_records_csv(out, records);
    out.flush();
    if (!out)
        throw IoError("write failed: " + path.string());
}

struct FamilyStat {
    int records = 0;             // records in the family
    int defined_repeatability = 0;
    int defined_localization = 0;
    std::optional<double> mean_repeatability;
    std::optional<double> mean_localization;
};

// Per-detector aggregation. Undefined cells are excluded from means, and
// the grand mean is reported both ways: over all defined records, and as
// the unweighted mean of the per-family means.
struct DetectorSummary {
    std::map<std::string, FamilyStat> per_family;
    std::optional<double> mean_repeatability_records;
    std::optional<double> mean_repeatability_families;
    std::optional<double> mean_localization_records;
    std::optional<double> mean_localization_families;
    long corner_count = 0;  // original-image corners, each image counted once
    int records = 0;
};

struct Summary {
    std::map<std::string, DetectorSummary> detectors;  // keyed by method name
};

inline Summary aggregate(const std::vector<EvalRecord>& records) {
    struct Acc {
        double sum = 0.0;
        int n = 0;
        void add(const std::optional<double>& v) {
            if (v) {
                sum += *v;
                ++n;
            }
        }
        std::optional<double> mean() const {
            if (n == 0) return std::nullopt;
            return sum / n;
        }
    };
    std::map<std::string, std::map<std::string, std::pair<Acc, Acc>>> fam;
    std::map<std::string, std::map<std::string, int>> fam_records;
    std::map<std::string, std::map<std::string, int>> corner_by_image;
    for (const EvalRecord& r : records) {
        auto& cell = fam[method_name(r.detector)][family_name(r.spec.family)];
        cell.first.add(r.repeatability);
        cell.second.add(r.localization);
        fam_records[method_name(r.detector)][family_name(r.spec.family)] += 1;
        corner_by_image[method_name(r.detector)][r.image] = r.original_count;
    }
    Summary out;
    for (auto& [det, families] : fam) {
        DetectorSummary ds;
        Acc rep_all, loc_all, rep_fam, loc_fam;
        for (auto& [fname, cell] : families) {
            FamilyStat st;
            st.records = fam_records[det][fname];
            st.defined_repeatability = cell.first.n;
            st.defined_localization = cell.second.n;
            st.mean_repeatability = cell.first.mean();
            st.mean_localization = cell.second.mean();
            ds.per_family[fname] = st;
            ds.records += st.records;
            rep_all.sum += cell.first.sum;
            rep_all.n += cell.first.n;
            loc_all.sum += cell.second.sum;
            loc_all.n += cell.second.n;
            rep_fam.add(st.mean_repeatability);
            loc_fam.add(st.mean_localization);
        }
        ds.mean_repeatability_records = rep_all.mean();
        ds.mean_repeatability_families = rep_fam.mean();
        ds.mean_localization_records = loc_all.mean();
        ds.mean_localization_families = loc_fam.mean();
        for (const auto& [img, count] : corner_by_image[det])
            ds.corner_count += count;
        out.detectors[det] = ds;
    }
    return out;
}

inline void write_summary_csv(std::ostream& out, const Summary& summary) {
    out << "detector,family,mean_repeatability,mean_localization_error,"
           "records,corner_count\n";
    char buf[64];
    auto opt = [&](const std::optional<double>& v) -> std::string {
        if (!v) return "NA";
        std::snprintf(buf, sizeof buf, "%.6f", *v);
        return buf;
    };
    for (const auto& [det, ds] : summary.detectors) {
        for (const auto& [fname, st] : ds.per_family)
            out << det << ',' << fname << ',' << opt(st.mean_repeatability)
                << ',' << opt(st.mean_localization) << ',' << st.records
                << ",NA\n";
        out << det << ",overall-records," << opt(ds.mean_repeatability_records)
            << ',' << opt(ds.mean_localization_records) << ',' << ds.records
            << ',' << ds.corner_count << '\n';
        out << det << ",overall-family-mean,"
            << opt(ds.mean_repeatability_families) << ','
            << opt(ds.mean_localization_families) << ',' << ds.records << ','
            << ds.corner_count << '\n';
    }
}

inline void write_summary_csv(const std::filesystem::path& path,
                              const Summary& summary) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    write_summary_csv(out, summary);
    out.flush();
    if (!out)
        throw IoError("write failed: " + path.string());
}

}  // namespace cadt
