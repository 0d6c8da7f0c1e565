#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

#include "geometry.hpp"
#include "image.hpp"
#include "types.hpp"

namespace cadt {

// Edge detection thresholds. When low/high are both positive they are used
// directly; otherwise high is taken at high_percentile of the nonzero
// gradient magnitudes and low = low_ratio * high, which adapts to contrast
// and noise level without per-image tuning.
struct CannyParams {
    double sigma = 1.5;
    double low = 0.0;
    double high = 0.0;
    double high_percentile = 0.70;
    double low_ratio = 0.40;
};

namespace detail {

inline std::vector<double> gaussian_kernel(double sigma) {
    if (sigma <= 0.0)
        throw std::invalid_argument("gaussian sigma must be positive");
    int half = int(std::ceil(3.0 * sigma));
    std::vector<double> k(size_t(2 * half + 1));
    double sum = 0.0;
    for (int i = -half; i <= half; ++i) {
        double v = std::exp(-0.5 * (double(i) * i) / (sigma * sigma));
        k[size_t(i + half)] = v;
        sum += v;
    }
    for (double& v : k) v /= sum;
    return k;
}

inline int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

// Separable Gaussian blur with replicated borders.
inline std::vector<double> gaussian_blur(const GrayImage& img, double sigma) {
    const auto k = gaussian_kernel(sigma);
    const int half = int(k.size() / 2);
    const int w = img.width(), h = img.height();
    std::vector<double> tmp(size_t(w) * h), out(size_t(w) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -half; i <= half; ++i)
                acc += k[size_t(i + half)] * img(clamp_index(x + i, w), y);
            tmp[size_t(y) * w + x] = acc;
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -half; i <= half; ++i)
                acc += k[size_t(i + half)] * tmp[size_t(clamp_index(y + i, h)) * w + x];
            out[size_t(y) * w + x] = acc;
        }
    return out;
}

// 8-neighborhood offsets, clockwise starting east (y grows downward).
inline constexpr int kDirX[8] = {1, 1, 0, -1, -1, -1, 0, 1};
inline constexpr int kDirY[8] = {0, 1, 1, 1, 0, -1, -1, -1};

inline int edge_degree(const EdgeMap& e, int x, int y) {
    int d = 0;
    for (int i = 0; i < 8; ++i)
        if (e.at(x + kDirX[i], y + kDirY[i])) ++d;
    return d;
}

// True when the edge pixels around (x, y) form a single 8-connected
// component without passing through (x, y) itself. Removing such a pixel
// cannot break a chain.
inline bool neighbors_single_component(const EdgeMap& e, int x, int y) {
    bool on[8];
    int count = 0;
    for (int i = 0; i < 8; ++i) {
        on[i] = e.at(x + kDirX[i], y + kDirY[i]);
        if (on[i]) ++count;
    }
    if (count == 0) return false;
    // flood within the ring; ring cells are adjacent when their pixel
    // coordinates are 8-adjacent
    int seen[8], stack[8], top = 0;
    for (int i = 0; i < 8; ++i) seen[i] = 0;
    int start = 0;
    while (!on[start]) ++start;
    stack[top++] = start;
    seen[start] = 1;
    int reached = 0;
    while (top > 0) {
        int i = stack[--top];
        ++reached;
        for (int j = 0; j < 8; ++j) {
            if (!on[j] || seen[j]) continue;
            int dx = kDirX[i] - kDirX[j], dy = kDirY[i] - kDirY[j];
            if (std::abs(dx) <= 1 && std::abs(dy) <= 1) {
                seen[j] = 1;
                stack[top++] = j;
            }
        }
    }
    return reached == count;
}

// Shave redundant pixels so chains come out single-pixel wide and junction
// flags only appear where distinct chains really meet. A pixel is removable
// when its on-neighbors stay mutually connected through the ring without it;
// endpoints (degree 1) are kept so open lines never shorten. Interior pixels
// of a thin line have a two-component ring and are safe; staircase bumps and
// double-wide runs have a single-component ring and erode away. Row-major
// sweeps, repeated to a fixed point, keep the result deterministic.
inline void thin_edges(EdgeMap& e) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (int y = 0; y < e.height; ++y)
            for (int x = 0; x < e.width; ++x) {
                if (!e.at(x, y)) continue;
                if (edge_degree(e, x, y) < 2) continue;
                if (neighbors_single_component(e, x, y)) {
                    e.set(x, y, false);
                    changed = true;
                }
            }
    }
}

// Suppression keeps only cross-gradient maxima, so the ridge cap where a
// contour turns sharply (the tip of a thin wedge) loses against the stronger
// flank pixels and a one-pixel hole opens between two chain ends. Bridge
// endpoint pairs separated by exactly one pixel so such contours trace as a
// single chain. Row-major endpoint order keeps the repair deterministic.
inline void bridge_gaps(EdgeMap& e) {
    std::vector<IVec2> ends;
    for (int y = 0; y < e.height; ++y)
        for (int x = 0; x < e.width; ++x)
            if (e.at(x, y) && edge_degree(e, x, y) <= 1) ends.push_back({x, y});
    std::vector<char> used(ends.size(), 0);
    for (size_t i = 0; i < ends.size(); ++i) {
        if (used[i]) continue;
        for (size_t j = i + 1; j < ends.size(); ++j) {
            if (used[j]) continue;
            int dx = ends[j].x - ends[i].x;
            int dy = ends[j].y - ends[i].y;
            if (std::max(std::abs(dx), std::abs(dy)) != 2) continue;
            int mx = ends[i].x + dx / 2;
            int my = ends[i].y + dy / 2;
            if (e.at(mx, my)) continue;
            e.set(mx, my);
            used[i] = used[j] = 1;
            break;
        }
    }
}

}  // namespace detail

// Canny edge detection: Gaussian blur, Sobel gradients, non-maximum
// suppression across the gradient direction, hysteresis, then a thinning
// pass. The image must be at least as large as the blur kernel.
inline EdgeMap detect_edges(const GrayImage& img, const CannyParams& params = {}) {
    const int w = img.width(), h = img.height();
    const auto kernel = detail::gaussian_kernel(params.sigma);
    if (w < int(kernel.size()) || h < int(kernel.size()))
        throw DegenerateInput("image smaller than the blur kernel");

    const auto blurred = detail::gaussian_blur(img, params.sigma);
    auto b = [&](int x, int y) {
        return blurred[size_t(detail::clamp_index(y, h)) * w + detail::clamp_index(x, w)];
    };

    std::vector<double> gx(size_t(w) * h), gy(size_t(w) * h), mag(size_t(w) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double dx = (b(x + 1, y - 1) + 2.0 * b(x + 1, y) + b(x + 1, y + 1)) -
                        (b(x - 1, y - 1) + 2.0 * b(x - 1, y) + b(x - 1, y + 1));
            double dy = (b(x - 1, y + 1) + 2.0 * b(x, y + 1) + b(x + 1, y + 1)) -
                        (b(x - 1, y - 1) + 2.0 * b(x, y - 1) + b(x + 1, y - 1));
            size_t i = size_t(y) * w + x;
            gx[i] = dx;
            gy[i] = dy;
            mag[i] = std::sqrt(dx * dx + dy * dy);
        }

    double high = params.high, low = params.low;
    if (!(low > 0.0 && high > 0.0)) {
        std::vector<double> nonzero;
        nonzero.reserve(mag.size() / 4);
        for (double m : mag)
            if (m > 0.0) nonzero.push_back(m);
        if (nonzero.empty()) return EdgeMap(w, h);
        size_t rank = size_t(std::llround(params.high_percentile *
                                          double(nonzero.size() - 1)));
        std::nth_element(nonzero.begin(), nonzero.begin() + rank, nonzero.end());
        high = nonzero[rank];
        low = params.low_ratio * high;
        if (high <= 0.0) return EdgeMap(w, h);
    }
    if (low >= high)
        throw std::invalid_argument("canny low threshold must be below high");

    // non-maximum suppression: keep ridge pixels of the magnitude field,
    // breaking plateau ties toward the negative side of the direction
    EdgeMap ridge(w, h);
    auto m_at = [&](int x, int y) -> double {
        if (x < 0 || y < 0 || x >= w || y >= h) return 0.0;
        return mag[size_t(y) * w + x];
    };
    constexpr double kTanLo = 0.41421356237309503;  // tan(22.5 deg)
    constexpr double kTanHi = 2.41421356237309503;  // tan(67.5 deg)
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            size_t i = size_t(y) * w + x;
            if (mag[i] < low) continue;
            double ax = std::abs(gx[i]), ay = std::abs(gy[i]);
            int dx, dy;
            if (ay <= kTanLo * ax) {
                dx = 1; dy = 0;
            } else if (ay >= kTanHi * ax) {
                dx = 0; dy = 1;
            } else {
                dx = 1; dy = (gx[i] * gy[i] > 0.0) ? 1 : -1;
            }
            if (mag[i] > m_at(x + dx, y + dy) && mag[i] >= m_at(x - dx, y - dy))
                ridge.set(x, y);
        }

    // hysteresis: grow from strong ridge pixels through weak ones
    EdgeMap out(w, h);
    std::vector<IVec2> stack;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (!ridge.at(x, y) || mag[size_t(y) * w + x] < high || out.at(x, y))
                continue;
            out.set(x, y);
            stack.push_back({x, y});
            while (!stack.empty()) {
                IVec2 p = stack.back();
                stack.pop_back();
                for (int d = 0; d < 8; ++d) {
                    int nx = p.x + detail::kDirX[d], ny = p.y + detail::kDirY[d];
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                    if (out.at(nx, ny) || !ridge.at(nx, ny)) continue;
                    if (mag[size_t(ny) * w + nx] < low) continue;
                    out.set(nx, ny);
                    stack.push_back({nx, ny});
                }
            }
        }

    detail::thin_edges(out);
    detail::bridge_gaps(out);
    detail::thin_edges(out);  // a bridge can make an adjacent elbow redundant
    return out;
}

inline EdgeMap detect_edges(const GrayImage& img, double low, double high,
                            double sigma) {
    if (low <= 0.0 || high <= low)
        throw std::invalid_argument("require 0 < low < high");
    CannyParams p;
    p.sigma = sigma;
    p.low = low;
    p.high = high;
    return detect_edges(img, p);
}

struct CurveSet {
    std::vector<Curve> curves;
    std::vector<TJunction> junctions;
};

namespace detail {

// Scan order for the next step: straight ahead first, then fanning out to
// gentler turns before sharper ones.
inline constexpr int kTurnOrder[8] = {0, 1, 7, 2, 6, 3, 5, 4};

struct Tracer {
    const EdgeMap& edges;
    std::vector<std::uint8_t> visited;
    std::vector<std::uint8_t> junction;

    explicit Tracer(const EdgeMap& e)
        : edges(e), visited(e.mask.size(), 0), junction(e.mask.size(), 0) {}

    size_t idx(IVec2 p) const { return size_t(p.y) * edges.width + p.x; }
    bool is_junction(IVec2 p) const { return junction[idx(p)] != 0; }
    bool is_visited(IVec2 p) const { return visited[idx(p)] != 0; }

    // Next chain pixel from cur, preferring the smallest turn relative to
    // the direction we arrived with. Junction pixels are never stepped onto.
    int next_dir(IVec2 cur, int arrive_dir) const {
        for (int t : kTurnOrder) {
            int d = (arrive_dir + t) % 8;
            IVec2 n{cur.x + kDirX[d], cur.y + kDirY[d]};
            if (n.x < 0 || n.y < 0 || n.x >= edges.width || n.y >= edges.height)
                continue;
            if (!edges.at(n.x, n.y) || is_visited(n) || is_junction(n)) continue;
            return d;
        }
        return -1;
    }

    // Junction adjacent to cur, if any, skipping the pixel we came from.
    // Scanned in the same turn order for determinism.
    bool adjacent_junction(IVec2 cur, int arrive_dir, IVec2 prev, IVec2* out) const {
        for (int t : kTurnOrder) {
            int d = (arrive_dir + t) % 8;
            IVec2 n{cur.x + kDirX[d], cur.y + kDirY[d]};
            if (n.x < 0 || n.y < 0 || n.x >= edges.width || n.y >= edges.height)
                continue;
            if (n == prev) continue;
            if (edges.at(n.x, n.y) && is_junction(n)) {
                *out = n;
                return true;
            }
        }
        return false;
    }

    // Walk from `first` (already chosen) extending `curve` until the chain
    // ends, meets a junction, or closes back onto curve.front().
    void walk(Curve& curve, IVec2 first, int first_dir) {
        IVec2 cur = first;
        int dir = first_dir;
        while (true) {
            curve.points.push_back(cur);
            visited[idx(cur)] = 1;
            int nd = next_dir(cur, dir);
            if (nd < 0) {
                IVec2 j;
                IVec2 prev = curve.points.size() >= 2
                                 ? curve.points[curve.points.size() - 2]
                                 : IVec2{-1, -1};
                if (adjacent_junction(cur, dir, prev, &j)) {
                    if (curve.points.front() == j)
                        curve.closed = true;
                    else
                        curve.points.push_back(j);
                } else if (curve.points.size() >= 4) {
                    IVec2 s = curve.points.front();
                    if (std::abs(s.x - cur.x) <= 1 && std::abs(s.y - cur.y) <= 1)
                        curve.closed = true;
                }
                return;
            }
            cur = {cur.x + kDirX[nd], cur.y + kDirY[nd]};
            dir = nd;
        }
    }
};

}  // namespace detail

// Splits an edge map into pixel chains. Pixels where three or more chains
// meet are reported as junctions and appended to each incident chain, so
// the chains still span the junction geometrically. Curves shorter than
// min_length points are dropped.
inline CurveSet extract_curves(const EdgeMap& edges, int min_length = 10) {
    if (min_length < 1)
        throw std::invalid_argument("min_length must be >= 1");
    CurveSet out;
    const int w = edges.width, h = edges.height;
    if (w <= 0 || h <= 0) return out;

    detail::Tracer tr(edges);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (!edges.at(x, y)) continue;
            if (detail::edge_degree(edges, x, y) >= 3) {
                tr.junction[size_t(y) * w + x] = 1;
                out.junctions.push_back({{x, y}});
            }
        }

    auto emit = [&](Curve&& c) {
        if (int(c.points.size()) >= min_length)
            out.curves.push_back(std::move(c));
    };

    // chains leaving a junction
    for (const TJunction& j : out.junctions) {
        for (int d = 0; d < 8; ++d) {
            IVec2 n{j.location.x + detail::kDirX[d], j.location.y + detail::kDirY[d]};
            if (n.x < 0 || n.y < 0 || n.x >= w || n.y >= h) continue;
            if (!edges.at(n.x, n.y) || tr.is_visited(n) || tr.is_junction(n))
                continue;
            Curve c;
            c.points.push_back(j.location);
            tr.walk(c, n, d);
            emit(std::move(c));
        }
    }
    // open chains with a free endpoint
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            IVec2 p{x, y};
            if (!edges.at(x, y) || tr.is_visited(p) || tr.is_junction(p)) continue;
            if (detail::edge_degree(edges, x, y) > 1) continue;
            Curve c;
            int d0 = tr.next_dir(p, 0);
            if (d0 < 0) {
                c.points.push_back(p);
                tr.visited[tr.idx(p)] = 1;
                emit(std::move(c));
                continue;
            }
            c.points.push_back(p);
            tr.visited[tr.idx(p)] = 1;
            tr.walk(c, {x + detail::kDirX[d0], y + detail::kDirY[d0]}, d0);
            emit(std::move(c));
        }
    // remaining pixels form loops
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            IVec2 p{x, y};
            if (!edges.at(x, y) || tr.is_visited(p) || tr.is_junction(p)) continue;
            Curve c;
            int d0 = tr.next_dir(p, 0);
            c.points.push_back(p);
            tr.visited[tr.idx(p)] = 1;
            if (d0 >= 0)
                tr.walk(c, {x + detail::kDirX[d0], y + detail::kDirY[d0]}, d0);
            emit(std::move(c));
        }
    return out;
}

// Gaussian smoothing of a point sequence, coordinate-wise. Open sequences
// replicate their endpoints; closed ones wrap around.
inline std::vector<Vec2> smooth_points(const std::vector<Vec2>& pts, double sigma,
                                       bool closed) {
    const auto kernel = detail::gaussian_kernel(sigma);
    const int half = int(kernel.size() / 2);
    const int n = int(pts.size());
    std::vector<Vec2> out(pts.size());
    if (n == 0) return out;
    for (int i = 0; i < n; ++i) {
        double sx = 0.0, sy = 0.0;
        for (int j = -half; j <= half; ++j) {
            int src = i + j;
            if (closed)
                src = ((src % n) + n) % n;
            else
                src = std::clamp(src, 0, n - 1);
            double g = kernel[size_t(j + half)];
            sx += g * pts[size_t(src)].x;
            sy += g * pts[size_t(src)].y;
        }
        out[size_t(i)] = {sx, sy};
    }
    return out;
}

inline SmoothedCurve smooth_curve(const Curve& curve, double sigma = 3.0) {
    std::vector<Vec2> pts;
    pts.reserve(curve.points.size());
    for (IVec2 p : curve.points) pts.push_back(to_vec2(p));
    return {smooth_points(pts, sigma, curve.closed), curve.closed};
}

// Debug dump: one block per curve, "# closed" or "# open" header then one
// "x y" pair per line, blocks separated by a blank line.
inline void write_curves(std::ostream& out, const std::vector<Curve>& curves) {
    for (size_t c = 0; c < curves.size(); ++c) {
        if (c) out << "\n";
        out << (curves[c].closed ? "# closed\n" : "# open\n");
        for (IVec2 p : curves[c].points) out << p.x << " " << p.y << "\n";
    }
}

inline void write_curves(std::ostream& out,
                         const std::vector<SmoothedCurve>& curves) {
    char line[64];
    for (size_t c = 0; c < curves.size(); ++c) {
        if (c) out << "\n";
        out << (curves[c].closed ? "# closed\n" : "# open\n");
        for (Vec2 p : curves[c].points) {
            std::snprintf(line, sizeof line, "%.4f %.4f\n", p.x, p.y);
            out << line;
        }
    }
}

}  // namespace cadt
