#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace cadt {

enum class ProfileKind {
    distance_product,  // accumulated chord distances, combined across chords
    ratio,             // arm ratio in (0, 1]
    angle_degrees,     // interior or deviation angle in (0, 180]
};

// Per-point curvature estimates along one curve. NaN marks points where the
// estimator's chord does not fit (too close to an open end, or a degenerate
// neighborhood).
struct CurvatureProfile {
    int curve_index = 0;
    ProfileKind kind = ProfileKind::angle_degrees;
    bool closed = false;
    std::vector<double> values;
};

inline bool is_defined(double v) { return !std::isnan(v); }

// Tunable parameters of the four detectors plus junction handling.
struct DetectorConfig {
    std::array<int, 3> cpda_chords{10, 20, 30};
    double cpda_curvature_threshold = 0.2;
    double cpda_angle_threshold = 157.0;   // degrees
    int ctar_k = 4;
    double ctar_threshold = 0.9896;
    int ctaa_k = 3;
    double ctaa_threshold = 163.5;         // degrees
    int cadt_l = 4;
    double cadt_threshold = 158.4;         // degrees
    double tjunction_min_distance = 5.0;   // pixels

    void validate() const {
        for (int c : cpda_chords)
            if (c < 1) throw std::invalid_argument("cpda chord length must be >= 1");
        if (cpda_curvature_threshold <= 0.0)
            throw std::invalid_argument("cpda curvature threshold must be positive");
        if (cpda_angle_threshold <= 0.0 || cpda_angle_threshold >= 180.0)
            throw std::invalid_argument("cpda angle threshold must be in (0, 180)");
        if (ctar_k < 1 || ctaa_k < 1 || cadt_l < 1)
            throw std::invalid_argument("chord half-lengths must be >= 1");
        if (ctar_threshold <= 0.0 || ctar_threshold > 1.0)
            throw std::invalid_argument("ctar threshold must be in (0, 1]");
        if (ctaa_threshold <= 0.0 || ctaa_threshold >= 180.0)
            throw std::invalid_argument("ctaa threshold must be in (0, 180)");
        if (cadt_threshold <= 0.0 || cadt_threshold >= 180.0)
            throw std::invalid_argument("cadt threshold must be in (0, 180)");
        if (tjunction_min_distance < 0.0)
            throw std::invalid_argument("tjunction min distance must be >= 0");
    }
};

enum class ThresholdSense { below, above };

// Indices of defined profile values strictly below (or above) the threshold,
// ascending. Values exactly at the threshold never qualify.
inline std::vector<int> threshold_candidates(const CurvatureProfile& profile,
                                             double threshold,
                                             ThresholdSense sense) {
    std::vector<int> out;
    for (int i = 0; i < int(profile.values.size()); ++i) {
        double v = profile.values[i];
        if (!is_defined(v)) continue;
        bool hit = sense == ThresholdSense::below ? v < threshold : v > threshold;
        if (hit) out.push_back(i);
    }
    return out;
}

enum class ExtremumSense { minima, maxima };

// Collapse each run of consecutive candidate indices to the run's extremal
// value, ties going to the lowest index. On closed profiles a run ending at
// the last index continues into a run starting at index 0, so a corner
// spanning the trace seam is still reported once.
inline std::vector<int> refine_local_extrema(const CurvatureProfile& profile,
                                             const std::vector<int>& candidates,
                                             ExtremumSense sense) {
    if (candidates.empty()) return {};
    std::vector<std::vector<int>> runs;
    for (int idx : candidates) {
        if (!runs.empty() && runs.back().back() + 1 == idx)
            runs.back().push_back(idx);
        else
            runs.push_back({idx});
    }
    int n = int(profile.values.size());
    if (profile.closed && runs.size() >= 2 && runs.front().front() == 0 &&
        runs.back().back() == n - 1) {
        for (int idx : runs.front()) runs.back().push_back(idx);
        runs.erase(runs.begin());
    }
    std::vector<int> out;
    for (const auto& run : runs) {
        int best = run.front();
        for (int idx : run) {
            double v = profile.values[idx];
            double bv = profile.values[best];
            bool better = sense == ExtremumSense::minima ? v < bv : v > bv;
            if (better || (v == bv && idx < best)) best = idx;
        }
        out.push_back(best);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace cadt
