#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "image.hpp"
#include "types.hpp"

namespace cadt {

// Test image with known corner locations.
struct SynthShape {
    std::string name;
    GrayImage image;
    std::vector<Vec2> vertices;
};

enum class ShapeKind { square, rectangle, star, lshape, polyline };

inline constexpr ShapeKind kAllShapeKinds[5] = {
    ShapeKind::square, ShapeKind::rectangle, ShapeKind::star,
    ShapeKind::lshape, ShapeKind::polyline};

inline const char* shape_kind_name(ShapeKind k) {
    switch (k) {
        case ShapeKind::square: return "square";
        case ShapeKind::rectangle: return "rectangle";
        case ShapeKind::star: return "star";
        case ShapeKind::lshape: return "lshape";
        case ShapeKind::polyline: return "polyline";
    }
    return "?";
}

namespace detail {

inline bool point_in_polygon(const std::vector<Vec2>& poly, Vec2 p) {
    bool inside = false;
    size_t n = poly.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            double x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < x) inside = !inside;
        }
    }
    return inside;
}

inline double segment_distance(Vec2 a, Vec2 b, Vec2 p) {
    Vec2 ab = b - a;
    double len2 = dot(ab, ab);
    if (len2 == 0.0) return distance(a, p);
    double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return distance({a.x + t * ab.x, a.y + t * ab.y}, p);
}

// 4x4 supersampled coverage of a filled polygon, white on black.
inline GrayImage render_polygon(int w, int h, const std::vector<Vec2>& poly) {
    constexpr int ss = 4;
    GrayImage img(w, h, 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            int hit = 0;
            for (int sy = 0; sy < ss; ++sy)
                for (int sx = 0; sx < ss; ++sx) {
                    Vec2 p{x + (sx + 0.5) / ss - 0.5, y + (sy + 0.5) / ss - 0.5};
                    if (point_in_polygon(poly, p)) ++hit;
                }
            if (hit)
                img(x, y) = std::uint8_t(
                    std::lround(255.0 * double(hit) / double(ss * ss)));
        }
    return img;
}

// Supersampled stroke: everything within half_width of the polyline.
inline GrayImage render_stroke(int w, int h, const std::vector<Vec2>& pts,
                               double half_width) {
    constexpr int ss = 4;
    GrayImage img(w, h, 0);
    // limit the per-pixel segment tests to a loose bounding box
    double minx = pts[0].x, maxx = pts[0].x, miny = pts[0].y, maxy = pts[0].y;
    for (Vec2 p : pts) {
        minx = std::min(minx, p.x);
        maxx = std::max(maxx, p.x);
        miny = std::min(miny, p.y);
        maxy = std::max(maxy, p.y);
    }
    int x0 = std::max(0, int(minx - half_width - 2));
    int x1 = std::min(w - 1, int(maxx + half_width + 2));
    int y0 = std::max(0, int(miny - half_width - 2));
    int y1 = std::min(h - 1, int(maxy + half_width + 2));
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            int hit = 0;
            for (int sy = 0; sy < ss; ++sy)
                for (int sx = 0; sx < ss; ++sx) {
                    Vec2 p{x + (sx + 0.5) / ss - 0.5, y + (sy + 0.5) / ss - 0.5};
                    for (size_t i = 0; i + 1 < pts.size(); ++i)
                        if (segment_distance(pts[i], pts[i + 1], p) <= half_width) {
                            ++hit;
                            break;
                        }
                }
            if (hit)
                img(x, y) = std::uint8_t(
                    std::lround(255.0 * double(hit) / double(ss * ss)));
        }
    return img;
}

inline Vec2 rotate_about(Vec2 p, Vec2 c, double angle_rad) {
    double co = std::cos(angle_rad), si = std::sin(angle_rad);
    Vec2 d = p - c;
    return {c.x + co * d.x - si * d.y, c.y + si * d.x + co * d.y};
}

}  // namespace detail

inline SynthShape make_polygon_shape(const std::string& name,
                                     std::vector<Vec2> poly, int size = 256) {
    SynthShape s;
    s.name = name;
    s.image = detail::render_polygon(size, size, poly);
    s.vertices = std::move(poly);
    return s;
}

inline SynthShape make_square(const std::string& name, Vec2 center, double half,
                              double angle_deg, int size = 256) {
    double a = angle_deg * (kPi / 180.0);
    std::vector<Vec2> poly;
    for (Vec2 d : {Vec2{-half, -half}, Vec2{half, -half}, Vec2{half, half},
                   Vec2{-half, half}})
        poly.push_back(detail::rotate_about(center + d, center, a));
    return make_polygon_shape(name, std::move(poly), size);
}

inline SynthShape make_rectangle(const std::string& name, Vec2 center,
                                 double hx, double hy, double angle_deg,
                                 int size = 256) {
    double a = angle_deg * (kPi / 180.0);
    std::vector<Vec2> poly;
    for (Vec2 d : {Vec2{-hx, -hy}, Vec2{hx, -hy}, Vec2{hx, hy}, Vec2{-hx, hy}})
        poly.push_back(detail::rotate_about(center + d, center, a));
    return make_polygon_shape(name, std::move(poly), size);
}

// Five-pointed star: outer and inner radii alternate. inner_ratio trades the
// sharpness of the points against the depth of the notches. The regular star
// polygon's ratio cos(72)/cos(36) = 0.382 gives 36-degree points whose raster
// contour is sub-pixel thin for its first ~2 px, so no edge pixel can sit at
// the analytic vertex; the default 0.5 keeps every point wide enough to
// localize while the notches stay well below any detector threshold.
inline SynthShape make_star(const std::string& name, Vec2 center, double radius,
                            double angle_deg, int size = 256,
                            double inner_ratio = 0.5) {
    double inner = radius * inner_ratio;
    std::vector<Vec2> poly;
    for (int i = 0; i < 10; ++i) {
        double r = (i % 2 == 0) ? radius : inner;
        double a = (angle_deg + 36.0 * i) * (kPi / 180.0) - kPi / 2.0;
        poly.push_back({center.x + r * std::cos(a), center.y + r * std::sin(a)});
    }
    return make_polygon_shape(name, std::move(poly), size);
}

// Axis-aligned L before rotation: full legs of length w and h, thickness t.
inline SynthShape make_lshape(const std::string& name, Vec2 center, double w,
                              double h, double t, double angle_deg,
                              int size = 256) {
    double a = angle_deg * (kPi / 180.0);
    Vec2 o{center.x - w / 2.0, center.y - h / 2.0};
    std::vector<Vec2> base = {{o.x, o.y},         {o.x + t, o.y},
                              {o.x + t, o.y + h - t}, {o.x + w, o.y + h - t},
                              {o.x + w, o.y + h}, {o.x, o.y + h}};
    std::vector<Vec2> poly;
    for (Vec2 p : base) poly.push_back(detail::rotate_about(p, center, a));
    return make_polygon_shape(name, std::move(poly), size);
}

// Open stroke of three points with a controlled interior angle at the
// middle vertex.
inline SynthShape make_polyline(const std::string& name, Vec2 vertex,
                                double arm1, double arm2, double dir_deg,
                                double interior_deg, double half_width = 2.0,
                                int size = 256) {
    double d0 = dir_deg * (kPi / 180.0);
    double d1 = (dir_deg + interior_deg) * (kPi / 180.0);
    std::vector<Vec2> pts = {
        {vertex.x + arm1 * std::cos(d0), vertex.y + arm1 * std::sin(d0)},
        vertex,
        {vertex.x + arm2 * std::cos(d1), vertex.y + arm2 * std::sin(d1)}};
    SynthShape s;
    s.name = name;
    s.image = detail::render_stroke(size, size, pts, half_width);
    s.vertices = pts;
    return s;
}

// Deterministic corpus cycling through the shape kinds with varied
// placement, size, and orientation.
inline std::vector<SynthShape> synth_corpus(
    int count = 20, std::uint64_t seed = 20260819ull,
    const std::vector<ShapeKind>& kinds = {kAllShapeKinds,
                                           kAllShapeKinds + 5}) {
    if (count < 1)
        throw std::invalid_argument("corpus count must be >= 1");
    if (kinds.empty())
        throw std::invalid_argument("corpus needs at least one shape kind");
    std::mt19937_64 rng(seed);
    auto uni = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };
    std::vector<SynthShape> out;
    out.reserve(size_t(count));
    for (int i = 0; i < count; ++i) {
        ShapeKind kind = kinds[size_t(i) % kinds.size()];
        Vec2 center{128.0 + uni(-12.0, 12.0), 128.0 + uni(-12.0, 12.0)};
        double angle = uni(0.0, 360.0);
        char name[64];
        std::snprintf(name, sizeof name, "%02d-%s", i, shape_kind_name(kind));
        switch (kind) {
            case ShapeKind::square:
                out.push_back(make_square(name, center, uni(42.0, 64.0), angle));
                break;
            case ShapeKind::rectangle:
                out.push_back(make_rectangle(name, center, uni(30.0, 52.0),
                                             uni(58.0, 80.0), angle));
                break;
            case ShapeKind::star:
                out.push_back(make_star(name, center, uni(72.0, 92.0), angle));
                break;
            case ShapeKind::lshape:
                out.push_back(make_lshape(name, center, uni(70.0, 105.0),
                                          uni(70.0, 105.0), uni(26.0, 40.0),
                                          angle));
                break;
            case ShapeKind::polyline:
                out.push_back(make_polyline(name, center, uni(72.0, 100.0),
                                            uni(72.0, 100.0), angle,
                                            uni(138.0, 150.0)));
                break;
        }
    }
    return out;
}

// Writes <name>.png plus a <name>.vertices.txt sidecar per shape.
inline void write_corpus(const std::filesystem::path& dir,
                         const std::vector<SynthShape>& shapes) {
    std::filesystem::create_directories(dir);
    char line[64];
    for (const SynthShape& s : shapes) {
        save_image(s.image, dir / (s.name + ".png"));
        std::ofstream out(dir / (s.name + ".vertices.txt"));
        if (!out)
            throw IoError("cannot write vertex sidecar for " + s.name);
        for (Vec2 v : s.vertices) {
            std::snprintf(line, sizeof line, "%.4f %.4f\n", v.x, v.y);
            out << line;
        }
    }
}

}  // namespace cadt
