#pragma once

#include <cmath>
#include <limits>

#include "types.hpp"

namespace cadt {

inline double norm(Vec2 v) { return std::sqrt(dot(v, v)); }
inline double distance(Vec2 a, Vec2 b) { return norm(b - a); }

inline double rad_to_deg(double r) { return r * (180.0 / kPi); }

constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

// Perpendicular distance from p to the infinite line through a and b.
// Falls back to point distance when the chord is degenerate.
inline double chord_point_distance(Vec2 a, Vec2 b, Vec2 p) {
    Vec2 ab = b - a;
    double len = norm(ab);
    if (len == 0.0) return distance(a, p);
    return std::abs(cross(ab, p - a)) / len;
}

// Ratio of the opposite side to the two arms of the triangle (prev, mid, next).
// Approaches 1 for flat triples, shrinks as the turn at mid sharpens.
// Degenerate arms (prev == mid == next) give 1.
inline double triangle_arm_ratio(Vec2 prev, Vec2 mid, Vec2 next) {
    double arms = distance(mid, prev) + distance(mid, next);
    if (arms == 0.0) return 1.0;
    return distance(prev, next) / arms;
}

// Interior angle at mid in degrees, in [0, 180]. Equivalent to the
// law-of-cosines angle from the triangle's side lengths, but evaluated from
// the arm vectors so that flat and folded triples are exact instead of
// suffering arccos roundoff near +/-1. Undefined (NaN) when an arm has zero
// length.
inline double interior_angle_deg(Vec2 prev, Vec2 mid, Vec2 next) {
    Vec2 w = prev - mid;
    Vec2 z = next - mid;
    if ((w.x == 0.0 && w.y == 0.0) || (z.x == 0.0 && z.y == 0.0))
        return kUndefined;
    return rad_to_deg(std::atan2(std::abs(cross(w, z)), dot(w, z)));
}

}  // namespace cadt
