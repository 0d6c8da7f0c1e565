#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cadt {

constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

struct IVec2 {
    int x = 0;
    int y = 0;
    bool operator==(const IVec2&) const = default;
};

inline Vec2 to_vec2(IVec2 p) { return {double(p.x), double(p.y)}; }

// Affine plane map (x, y) -> (a*x + b*y + c, d*x + e*y + f).
struct Affine {
    double a = 1.0, b = 0.0, c = 0.0;
    double d = 0.0, e = 1.0, f = 0.0;

    Vec2 operator()(Vec2 p) const {
        return {a * p.x + b * p.y + c, d * p.x + e * p.y + f};
    }

    double det() const { return a * e - b * d; }

    Affine inverse() const {
        double det_ = det();
        if (det_ == 0.0)
            throw std::invalid_argument("affine map is singular");
        double ia = e / det_;
        double ib = -b / det_;
        double id = -d / det_;
        double ie = a / det_;
        return {ia, ib, -(ia * c + ib * f), id, ie, -(id * c + ie * f)};
    }

    static Affine identity() { return {}; }
};

inline Vec2 map_point(const Affine& m, Vec2 p) { return m(p); }

// Binary edge mask produced by edge detection.
struct EdgeMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> mask;  // row-major, nonzero = edge pixel

    EdgeMap() = default;
    EdgeMap(int w, int h) : width(w), height(h), mask(size_t(w) * size_t(h), 0) {}

    bool at(int x, int y) const {
        if (x < 0 || y < 0 || x >= width || y >= height) return false;
        return mask[size_t(y) * width + x] != 0;
    }
    void set(int x, int y, bool v = true) {
        mask[size_t(y) * width + x] = v ? 1 : 0;
    }
};

// Pixel chain traced from an edge map. Closed curves wrap around; the first
// point is not repeated at the end.
struct Curve {
    std::vector<IVec2> points;
    bool closed = false;
};

// Curve after per-coordinate Gaussian smoothing; geometry is subpixel.
struct SmoothedCurve {
    std::vector<Vec2> points;
    bool closed = false;
};

// Pixel where three or more edge chains meet.
struct TJunction {
    IVec2 location;
};

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File missing, unreadable, or unwritable.
struct IoError : Error {
    using Error::Error;
};

// File readable but not in a supported or well-formed format.
struct FormatError : Error {
    using Error::Error;
};

// Input too small or empty for the requested operation.
struct DegenerateInput : Error {
    using Error::Error;
};

}  // namespace cadt
