#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "profile.hpp"
#include "types.hpp"

namespace cadt {

// Angle of the curve at mid, measured as 180 degrees minus the deviation
// between the tangent directions of the two chord halves [prev, mid] and
// [mid, next]. A straight continuation gives 180, a hairpin gives 0.
//
// The deviation is evaluated as atan2(|u x v|, |u . v|), which equals
// arctan|(m1 - m2) / (1 + m1*m2)| wherever both slopes exist and extends it
// continuously to vertical segments and to perpendicular pairs
// (1 + m1*m2 == 0). Everything here is arithmetic on the raw direction
// components; no root extraction is needed because the magnitude terms
// cancel out of the ratio.
//
// Undefined (NaN) when both halves have zero length. A single zero-length
// half carries no direction evidence and reads as no deviation (180).
inline double tangent_deviation_deg(Vec2 prev, Vec2 mid, Vec2 next) {
    const double ux = mid.x - prev.x;
    const double uy = mid.y - prev.y;
    const double vx = next.x - mid.x;
    const double vy = next.y - mid.y;
    if (ux == 0.0 && uy == 0.0 && vx == 0.0 && vy == 0.0)
        return std::numeric_limits<double>::quiet_NaN();
    const double deviation = std::atan2(std::abs(ux * vy - uy * vx),
                                        std::abs(ux * vx + uy * vy));
    return 180.0 - deviation * (180.0 / kPi);
}

// Tangent-deviation angle at every curve point whose half-chords of
// half_chord points fit on the curve. Open ends that the chord cannot reach
// are undefined; closed curves wrap and define every point.
inline CurvatureProfile cadt_curvature(const SmoothedCurve& curve,
                                       int half_chord,
                                       int curve_index = 0) {
    if (half_chord < 1)
        throw std::invalid_argument("cadt half-chord must be >= 1");
    const int n = int(curve.points.size());
    CurvatureProfile profile;
    profile.curve_index = curve_index;
    profile.kind = ProfileKind::angle_degrees;
    profile.closed = curve.closed;
    profile.values.assign(size_t(n), std::numeric_limits<double>::quiet_NaN());
    if (n <= 2 * half_chord) return profile;
    if (curve.closed) {
        for (int i = 0; i < n; ++i) {
            const Vec2 prev = curve.points[size_t((i - half_chord + n) % n)];
            const Vec2 next = curve.points[size_t((i + half_chord) % n)];
            profile.values[size_t(i)] =
                tangent_deviation_deg(prev, curve.points[size_t(i)], next);
        }
    } else {
        for (int i = half_chord; i < n - half_chord; ++i) {
            profile.values[size_t(i)] =
                tangent_deviation_deg(curve.points[size_t(i - half_chord)],
                                      curve.points[size_t(i)],
                                      curve.points[size_t(i + half_chord)]);
        }
    }
    return profile;
}

}  // namespace cadt
