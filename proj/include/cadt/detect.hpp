#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "contour.hpp"
#include "curvature.hpp"
#include "image.hpp"
#include "tangent_deviation.hpp"

namespace cadt {

enum class Method { cpda, ctar, ctaa, cadt };

inline constexpr Method kAllMethods[4] = {Method::cpda, Method::ctar,
                                          Method::ctaa, Method::cadt};

inline const char* method_name(Method m) {
    switch (m) {
        case Method::cpda: return "cpda";
        case Method::ctar: return "ctar";
        case Method::ctaa: return "ctaa";
        case Method::cadt: return "cadt";
    }
    return "?";
}

inline std::optional<Method> method_from_name(std::string_view name) {
    for (Method m : kAllMethods)
        if (name == method_name(m)) return m;
    return std::nullopt;
}

struct Corner {
    double x = 0.0;
    double y = 0.0;
    int curve_index = -1;   // -1 for junction corners
    int point_index = -1;   // -1 for junction corners
    double curvature = 0.0; // value of the detector's profile at the corner
    Method detector = Method::cadt;
};

// Knobs for the full image-to-corners pipeline.
struct PipelineConfig {
    CannyParams canny;
    double curve_sigma = 3.0;
    int min_curve_length = 10;
    DetectorConfig detector;
};

struct Preprocessed {
    std::vector<SmoothedCurve> curves;
    std::vector<TJunction> junctions;
};

// Edge detection, curve extraction, and smoothing. Shared by all four
// detectors so a benchmark can run them off one preprocessing pass.
inline Preprocessed preprocess(const GrayImage& img,
                               const PipelineConfig& cfg = {}) {
    if (cfg.curve_sigma <= 0.0)
        throw std::invalid_argument("curve smoothing sigma must be positive");
    EdgeMap edges = detect_edges(img, cfg.canny);
    CurveSet cs = extract_curves(edges, cfg.min_curve_length);
    Preprocessed out;
    out.junctions = std::move(cs.junctions);
    out.curves.reserve(cs.curves.size());
    for (const Curve& c : cs.curves)
        out.curves.push_back(smooth_curve(c, cfg.curve_sigma));
    return out;
}

// Curvature profile of one curve under the given method.
inline CurvatureProfile method_curvature(const SmoothedCurve& curve,
                                         int curve_index, Method m,
                                         const DetectorConfig& cfg) {
    switch (m) {
        case Method::cpda:
            return cpda_combine(cpda_curvature(curve, cfg.cpda_chords[0], curve_index),
                                cpda_curvature(curve, cfg.cpda_chords[1], curve_index),
                                cpda_curvature(curve, cfg.cpda_chords[2], curve_index));
        case Method::ctar:
            return ctar_curvature(curve, cfg.ctar_k, curve_index);
        case Method::ctaa:
            return ctaa_curvature(curve, cfg.ctaa_k, curve_index);
        case Method::cadt:
            return cadt_curvature(curve, cfg.cadt_l, curve_index);
    }
    throw std::invalid_argument("unknown method");
}

namespace detail {

// CPDA keeps curvature maxima above the product threshold, then discards
// candidates that sit on a nearly straight span between their neighboring
// candidates (or the curve end, for the outermost ones). A lone candidate
// has nothing to test against and is kept.
inline std::vector<int> cpda_candidates(const SmoothedCurve& curve,
                                        const CurvatureProfile& profile,
                                        const DetectorConfig& cfg) {
    auto cand = threshold_candidates(profile, cfg.cpda_curvature_threshold,
                                     ThresholdSense::above);
    auto kept = refine_local_extrema(profile, cand, ExtremumSense::maxima);
    if (kept.size() <= 1) return kept;
    std::vector<int> out;
    const auto& pts = curve.points;
    for (size_t t = 0; t < kept.size(); ++t) {
        Vec2 here = pts[size_t(kept[t])];
        Vec2 prev, next;
        if (t > 0)
            prev = pts[size_t(kept[t - 1])];
        else
            prev = curve.closed ? pts[size_t(kept.back())] : pts.front();
        if (t + 1 < kept.size())
            next = pts[size_t(kept[t + 1])];
        else
            next = curve.closed ? pts[size_t(kept.front())] : pts.back();
        double angle = interior_angle_deg(prev, here, next);
        if (is_defined(angle) && angle >= cfg.cpda_angle_threshold) continue;
        out.push_back(kept[t]);
    }
    return out;
}

}  // namespace detail

// Runs one detector over already-preprocessed curves. T-junctions farther
// than tjunction_min_distance from every curve corner are appended as
// corners of their own, marked with curve_index = point_index = -1.
inline std::vector<Corner> detect_on_curves(
    const std::vector<SmoothedCurve>& curves,
    const std::vector<TJunction>& junctions, Method m,
    const DetectorConfig& cfg = {}) {
    cfg.validate();
    std::vector<Corner> corners;
    for (size_t ci = 0; ci < curves.size(); ++ci) {
        const SmoothedCurve& curve = curves[ci];
        CurvatureProfile profile = method_curvature(curve, int(ci), m, cfg);
        std::vector<int> kept;
        if (m == Method::cpda) {
            kept = detail::cpda_candidates(curve, profile, cfg);
        } else {
            double threshold = m == Method::ctar   ? cfg.ctar_threshold
                               : m == Method::ctaa ? cfg.ctaa_threshold
                                                   : cfg.cadt_threshold;
            auto cand =
                threshold_candidates(profile, threshold, ThresholdSense::below);
            kept = refine_local_extrema(profile, cand, ExtremumSense::minima);
        }
        for (int idx : kept) {
            Vec2 p = curve.points[size_t(idx)];
            corners.push_back({p.x, p.y, int(ci), idx,
                               profile.values[size_t(idx)], m});
        }
    }
    const double min_d2 = cfg.tjunction_min_distance * cfg.tjunction_min_distance;
    const size_t curve_corner_count = corners.size();
    for (const TJunction& j : junctions) {
        Vec2 jp = to_vec2(j.location);
        bool clear = true;
        for (size_t i = 0; i < curve_corner_count && clear; ++i) {
            Vec2 d = Vec2{corners[i].x, corners[i].y} - jp;
            if (dot(d, d) <= min_d2) clear = false;
        }
        if (clear) corners.push_back({jp.x, jp.y, -1, -1, 0.0, m});
    }
    return corners;
}

inline std::vector<Corner> cpda_detect(const std::vector<SmoothedCurve>& curves,
                                       const std::vector<TJunction>& junctions,
                                       const DetectorConfig& cfg = {}) {
    return detect_on_curves(curves, junctions, Method::cpda, cfg);
}

// Full pipeline: edges, curves, smoothing, then the chosen detector.
inline std::vector<Corner> detect(const GrayImage& img, Method m,
                                  const PipelineConfig& cfg = {}) {
    Preprocessed pre = preprocess(img, cfg);
    return detect_on_curves(pre.curves, pre.junctions, m, cfg.detector);
}

// Corner list as text: a detector header line, then one corner per line.
inline void write_corners(std::ostream& out, const std::vector<Corner>& corners,
                          Method m) {
    out << "# detector=" << method_name(m) << "\n";
    char line[128];
    for (const Corner& c : corners) {
        std::snprintf(line, sizeof line, "%.4f %.4f %.8g %d %d\n", c.x, c.y,
                      c.curvature, c.curve_index, c.point_index);
        out << line;
    }
}

inline void write_corners(const std::filesystem::path& path,
                          const std::vector<Corner>& corners, Method m) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    write_corners(out, corners, m);
    out.flush();
    if (!out)
        throw IoError("write failed: " + path.string());
}

// Copy of the image with a small hollow square drawn over every corner.
inline GrayImage overlay_corners(const GrayImage& img,
                                 const std::vector<Corner>& corners) {
    GrayImage out = img;
    constexpr int r = 3;
    for (const Corner& c : corners) {
        int cx = int(std::lround(c.x)), cy = int(std::lround(c.y));
        for (int dy = -r; dy <= r; ++dy)
            for (int dx = -r; dx <= r; ++dx) {
                if (std::max(std::abs(dx), std::abs(dy)) != r && !(dx == 0 && dy == 0))
                    continue;
                int x = cx + dx, y = cy + dy;
                if (x < 0 || y < 0 || x >= out.width() || y >= out.height())
                    continue;
                out(x, y) = 255;
            }
    }
    return out;
}

}  // namespace cadt
