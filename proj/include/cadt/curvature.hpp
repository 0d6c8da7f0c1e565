#pragma once

#include <stdexcept>

#include "geometry.hpp"
#include "profile.hpp"
#include "types.hpp"

namespace cadt {

// Accumulated chord-to-point distance for one chord length. The chord of
// `chord` points slides across each point q; every placement keeping q
// strictly inside contributes the perpendicular distance from q to the
// chord line. Curves with no more than 2*chord points are all-undefined.
inline CurvatureProfile cpda_curvature(const SmoothedCurve& curve, int chord,
                                       int curve_index = 0) {
    if (chord < 1)
        throw std::invalid_argument("cpda chord length must be >= 1");
    const int n = int(curve.points.size());
    CurvatureProfile profile;
    profile.curve_index = curve_index;
    profile.kind = ProfileKind::distance_product;
    profile.closed = curve.closed;
    profile.values.assign(size_t(n), kUndefined);
    if (n <= 2 * chord) return profile;
    auto pt = [&](int i) {
        return curve.points[size_t(((i % n) + n) % n)];
    };
    const int q_begin = curve.closed ? 0 : chord;
    const int q_end = curve.closed ? n : n - chord;
    for (int q = q_begin; q < q_end; ++q) {
        double h = 0.0;
        for (int j = q - chord + 1; j <= q - 1; ++j)
            h += chord_point_distance(pt(j), pt(j + chord), pt(q));
        profile.values[size_t(q)] = h;
    }
    return profile;
}

// Normalizes each accumulation profile by its own maximum and multiplies
// the three pointwise. A profile whose maximum is 0 (perfectly straight
// curve) contributes 0 everywhere rather than dividing by zero. Points
// undefined in any input stay undefined.
inline CurvatureProfile cpda_combine(const CurvatureProfile& p1,
                                     const CurvatureProfile& p2,
                                     const CurvatureProfile& p3) {
    const CurvatureProfile* ps[3] = {&p1, &p2, &p3};
    for (const auto* p : ps) {
        if (p->values.size() != p1.values.size())
            throw std::invalid_argument("cpda_combine: profile sizes differ");
        if (p->curve_index != p1.curve_index || p->closed != p1.closed)
            throw std::invalid_argument("cpda_combine: profiles from different curves");
    }
    double maxima[3] = {0.0, 0.0, 0.0};
    for (int i = 0; i < 3; ++i)
        for (double v : ps[i]->values)
            if (is_defined(v) && v > maxima[i]) maxima[i] = v;
    CurvatureProfile out;
    out.curve_index = p1.curve_index;
    out.kind = ProfileKind::distance_product;
    out.closed = p1.closed;
    out.values.assign(p1.values.size(), kUndefined);
    for (size_t q = 0; q < out.values.size(); ++q) {
        double prod = 1.0;
        bool defined = true;
        for (int i = 0; i < 3; ++i) {
            double v = ps[i]->values[q];
            if (!is_defined(v)) {
                defined = false;
                break;
            }
            prod *= maxima[i] > 0.0 ? v / maxima[i] : 0.0;
        }
        if (defined) out.values[q] = prod;
    }
    return out;
}

// Ratio of the chord spanning points i-k..i+k to the two half-chord arms.
// Flat neighborhoods give values near 1, sharp turns push the ratio down.
inline CurvatureProfile ctar_curvature(const SmoothedCurve& curve, int k,
                                       int curve_index = 0) {
    if (k < 1)
        throw std::invalid_argument("ctar half-chord must be >= 1");
    const int n = int(curve.points.size());
    CurvatureProfile profile;
    profile.curve_index = curve_index;
    profile.kind = ProfileKind::ratio;
    profile.closed = curve.closed;
    profile.values.assign(size_t(n), kUndefined);
    if (n <= 2 * k) return profile;
    if (curve.closed) {
        for (int i = 0; i < n; ++i)
            profile.values[size_t(i)] =
                triangle_arm_ratio(curve.points[size_t((i - k + n) % n)],
                                   curve.points[size_t(i)],
                                   curve.points[size_t((i + k) % n)]);
    } else {
        for (int i = k; i < n - k; ++i)
            profile.values[size_t(i)] =
                triangle_arm_ratio(curve.points[size_t(i - k)],
                                   curve.points[size_t(i)],
                                   curve.points[size_t(i + k)]);
    }
    return profile;
}

// Interior angle at each point subtended by its k-th neighbors, degrees.
// Points whose arms collapse to zero length are undefined.
inline CurvatureProfile ctaa_curvature(const SmoothedCurve& curve, int k,
                                       int curve_index = 0) {
    if (k < 1)
        throw std::invalid_argument("ctaa half-chord must be >= 1");
    const int n = int(curve.points.size());
    CurvatureProfile profile;
    profile.curve_index = curve_index;
    profile.kind = ProfileKind::angle_degrees;
    profile.closed = curve.closed;
    profile.values.assign(size_t(n), kUndefined);
    if (n <= 2 * k) return profile;
    if (curve.closed) {
        for (int i = 0; i < n; ++i)
            profile.values[size_t(i)] =
                interior_angle_deg(curve.points[size_t((i - k + n) % n)],
                                   curve.points[size_t(i)],
                                   curve.points[size_t((i + k) % n)]);
    } else {
        for (int i = k; i < n - k; ++i)
            profile.values[size_t(i)] =
                interior_angle_deg(curve.points[size_t(i - k)],
                                   curve.points[size_t(i)],
                                   curve.points[size_t(i + k)]);
    }
    return profile;
}

}  // namespace cadt
