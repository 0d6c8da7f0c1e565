#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "image.hpp"
#include "types.hpp"

namespace cadt {

enum class Family {
    scaling,
    shearing,
    rotation,
    rotation_scale,
    nonuniform_scale,
    jpeg,
    gaussian_noise,
};

inline constexpr Family kAllFamilies[7] = {
    Family::scaling,        Family::shearing, Family::rotation,
    Family::rotation_scale, Family::nonuniform_scale,
    Family::jpeg,           Family::gaussian_noise};

inline const char* family_name(Family f) {
    switch (f) {
        case Family::scaling: return "scaling";
        case Family::shearing: return "shearing";
        case Family::rotation: return "rotation";
        case Family::rotation_scale: return "rotation-scale";
        case Family::nonuniform_scale: return "nonuniform-scale";
        case Family::jpeg: return "jpeg";
        case Family::gaussian_noise: return "gaussian-noise";
    }
    return "?";
}

inline std::optional<Family> family_from_name(std::string_view name) {
    for (Family f : kAllFamilies)
        if (name == family_name(f)) return f;
    return std::nullopt;
}

inline bool is_geometric(Family f) {
    return f != Family::jpeg && f != Family::gaussian_noise;
}

struct TransformSpec {
    Family family = Family::scaling;
    double sx = 1.0, sy = 1.0;    // scaling, rotation-scale, nonuniform-scale
    double shx = 0.0, shy = 0.0;  // shearing
    double angle_deg = 0.0;       // rotation, rotation-scale
    int jpeg_quality = 100;       // jpeg
    double noise_variance = 0.0;  // gaussian-noise, of intensity in [0, 1]
};

// Compact parameter tag; doubles as the cache file stem.
inline std::string param_string(const TransformSpec& spec) {
    char buf[96];
    switch (spec.family) {
        case Family::scaling:
            std::snprintf(buf, sizeof buf, "s%.2f", spec.sx);
            break;
        case Family::shearing:
            std::snprintf(buf, sizeof buf, "shx%.3f_shy%.3f", spec.shx, spec.shy);
            break;
        case Family::rotation:
            std::snprintf(buf, sizeof buf, "rot%+d", int(std::lround(spec.angle_deg)));
            break;
        case Family::rotation_scale:
            std::snprintf(buf, sizeof buf, "rot%+d_sx%.1f_sy%.1f",
                          int(std::lround(spec.angle_deg)), spec.sx, spec.sy);
            break;
        case Family::nonuniform_scale:
            std::snprintf(buf, sizeof buf, "sx%.1f_sy%.1f", spec.sx, spec.sy);
            break;
        case Family::jpeg:
            std::snprintf(buf, sizeof buf, "q%d", spec.jpeg_quality);
            break;
        case Family::gaussian_noise:
            std::snprintf(buf, sizeof buf, "v%.3f", spec.noise_variance);
            break;
    }
    return buf;
}

// The benchmark's transformation suite: 362 specs per image across seven
// families. Pass a family to enumerate just that slice.
inline std::vector<TransformSpec> enumerate_suite(
    std::optional<Family> only = std::nullopt) {
    std::vector<TransformSpec> out;
    auto want = [&](Family f) { return !only || *only == f; };

    if (want(Family::scaling)) {
        for (int i = 5; i <= 20; ++i) {
            if (i == 10) continue;
            TransformSpec s;
            s.family = Family::scaling;
            s.sx = s.sy = double(i) / 10.0;
            out.push_back(s);
        }
    }
    if (want(Family::shearing)) {
        for (int ix = 0; ix <= 6; ++ix)
            for (int iy = 0; iy <= 6; ++iy) {
                if (ix == 0 && iy == 0) continue;
                if (ix == 6 && iy == 6) continue;  // see suite_warnings()
                TransformSpec s;
                s.family = Family::shearing;
                s.shx = double(ix) * 0.002;
                s.shy = double(iy) * 0.002;
                out.push_back(s);
            }
    }
    if (want(Family::rotation)) {
        for (int a = -90; a <= 90; a += 10) {
            if (a == 0) continue;
            TransformSpec s;
            s.family = Family::rotation;
            s.angle_deg = a;
            out.push_back(s);
        }
    }
    if (want(Family::rotation_scale)) {
        for (int a = -30; a <= 30; a += 10)
            for (int ix = 8; ix <= 12; ++ix)
                for (int iy = 8; iy <= 12; ++iy) {
                    TransformSpec s;
                    s.family = Family::rotation_scale;
                    s.angle_deg = a;
                    s.sx = double(ix) / 10.0;
                    s.sy = double(iy) / 10.0;
                    out.push_back(s);
                }
    }
    if (want(Family::nonuniform_scale)) {
        for (int ix = 7; ix <= 13; ++ix)
            for (int iy = 5; iy <= 15; ++iy) {
                TransformSpec s;
                s.family = Family::nonuniform_scale;
                s.sx = double(ix) / 10.0;
                s.sy = double(iy) / 10.0;
                out.push_back(s);
            }
    }
    if (want(Family::jpeg)) {
        for (int q = 5; q <= 100; q += 5) {
            TransformSpec s;
            s.family = Family::jpeg;
            s.jpeg_quality = q;
            out.push_back(s);
        }
    }
    if (want(Family::gaussian_noise)) {
        for (int i = 1; i <= 10; ++i) {
            TransformSpec s;
            s.family = Family::gaussian_noise;
            s.noise_variance = double(i) * 0.005;
            out.push_back(s);
        }
    }
    return out;
}

// Known gaps between this enumeration and the published per-image counts.
// Reported rather than silently patched over.
inline std::vector<std::string> suite_warnings() {
    return {
        "rotation: 18 angles enumerated (-90..90 step 10 without 0); the "
        "published per-image count implies 19, and a 19th angle is not "
        "derivable from the stated range",
        "shearing: the factor grid {0,0.002,...,0.012}^2 minus the identity "
        "holds 48 pairs; (0.012, 0.012) is omitted to match the published "
        "count of 47",
    };
}

namespace detail {

struct Linear {
    double a, b, d, e;
};

inline Linear linear_part(const TransformSpec& spec) {
    switch (spec.family) {
        case Family::scaling:
            return {spec.sx, 0.0, 0.0, spec.sy};
        case Family::shearing:
            return {1.0, spec.shx, spec.shy, 1.0};
        case Family::rotation: {
            double r = spec.angle_deg * (kPi / 180.0);
            return {std::cos(r), -std::sin(r), std::sin(r), std::cos(r)};
        }
        case Family::rotation_scale: {
            // rotate about the center, then scale the axes
            double r = spec.angle_deg * (kPi / 180.0);
            return {spec.sx * std::cos(r), -spec.sx * std::sin(r),
                    spec.sy * std::sin(r), spec.sy * std::cos(r)};
        }
        case Family::nonuniform_scale:
            return {spec.sx, 0.0, 0.0, spec.sy};
        case Family::jpeg:
        case Family::gaussian_noise:
            return {1.0, 0.0, 0.0, 1.0};
    }
    return {1.0, 0.0, 0.0, 1.0};
}

}  // namespace detail

// Forward map from source to destination pixel coordinates. Geometry is
// applied about the image center and the result is shifted so the warped
// bounding box starts at the origin; out_w/out_h receive the canvas size
// that contains it.
inline Affine forward_affine(const TransformSpec& spec, int width, int height,
                             int* out_w = nullptr, int* out_h = nullptr) {
    detail::Linear m = detail::linear_part(spec);
    if (std::abs(m.a * m.e - m.b * m.d) < 1e-12)
        throw std::invalid_argument("transform is singular");
    const double cx = (width - 1) / 2.0, cy = (height - 1) / 2.0;
    double minx = 0.0, miny = 0.0, maxx = 0.0, maxy = 0.0;
    bool first = true;
    for (double px : {0.0, double(width - 1)})
        for (double py : {0.0, double(height - 1)}) {
            double x = m.a * (px - cx) + m.b * (py - cy);
            double y = m.d * (px - cx) + m.e * (py - cy);
            if (first) {
                minx = maxx = x;
                miny = maxy = y;
                first = false;
            } else {
                minx = std::min(minx, x);
                maxx = std::max(maxx, x);
                miny = std::min(miny, y);
                maxy = std::max(maxy, y);
            }
        }
    if (out_w) *out_w = int(std::ceil(maxx - minx - 1e-9)) + 1;
    if (out_h) *out_h = int(std::ceil(maxy - miny - 1e-9)) + 1;
    return {m.a, m.b, -(m.a * cx + m.b * cy) - minx,
            m.d, m.e, -(m.d * cx + m.e * cy) - miny};
}

struct TransformedImage {
    GrayImage image;
    TransformSpec spec;
    Affine forward_map;
};

// Renders the spec against the image. Geometric families inverse-map each
// destination pixel and sample bilinearly, with out-of-range taps reading
// as 0. The seed only matters for gaussian-noise.
inline TransformedImage apply_transform(const GrayImage& img,
                                        const TransformSpec& spec,
                                        std::uint64_t seed = 0) {
    TransformedImage out;
    out.spec = spec;

    if (spec.family == Family::jpeg) {
        out.image = jpeg_reencode(img, spec.jpeg_quality);
        out.forward_map = Affine::identity();
        return out;
    }
    if (spec.family == Family::gaussian_noise) {
        if (spec.noise_variance < 0.0)
            throw std::invalid_argument("noise variance must be >= 0");
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> noise(
            0.0, std::sqrt(spec.noise_variance) * 255.0);
        GrayImage noisy = img;
        for (auto& px : noisy.data()) {
            double v = double(px) + noise(rng);
            long r = std::lround(v);  // rounds half away from zero
            px = std::uint8_t(std::clamp(r, 0l, 255l));
        }
        out.image = std::move(noisy);
        out.forward_map = Affine::identity();
        return out;
    }

    int ow = 0, oh = 0;
    out.forward_map = forward_affine(spec, img.width(), img.height(), &ow, &oh);
    Affine inv = out.forward_map.inverse();
    GrayImage dst(ow, oh, 0);
    const int w = img.width(), h = img.height();
    for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x) {
            Vec2 s = inv({double(x), double(y)});
            if (s.x <= -1.0 || s.y <= -1.0 || s.x >= double(w) || s.y >= double(h))
                continue;
            int x0 = int(std::floor(s.x)), y0 = int(std::floor(s.y));
            double fx = s.x - x0, fy = s.y - y0;
            auto tap = [&](int xi, int yi) -> double {
                if (xi < 0 || yi < 0 || xi >= w || yi >= h) return 0.0;
                return img(xi, yi);
            };
            double v = (1.0 - fy) * ((1.0 - fx) * tap(x0, y0) + fx * tap(x0 + 1, y0)) +
                       fy * ((1.0 - fx) * tap(x0, y0 + 1) + fx * tap(x0 + 1, y0 + 1));
            dst(x, y) = std::uint8_t(std::clamp(long(std::floor(v + 0.5)), 0l, 255l));
        }
    out.image = std::move(dst);
    return out;
}

inline std::uint64_t fnv1a64(std::string_view s,
                             std::uint64_t h = 14695981039346656037ull) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Stable per-work-item seed: mixes the run seed with the image stem and the
// spec's parameter tag, so results do not depend on scheduling order.
inline std::uint64_t derive_seed(std::uint64_t run_seed, std::string_view stem,
                                 std::string_view params) {
    std::uint64_t h = fnv1a64(stem);
    h = fnv1a64("|", h);
    h = fnv1a64(params, h);
    for (int i = 0; i < 8; ++i) {
        h ^= (run_seed >> (8 * i)) & 0xff;
        h *= 1099511628211ull;
    }
    return h;
}

// Sidecar with the six forward-map coefficients.
inline void write_affine(const std::filesystem::path& path, const Affine& m) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    char line[256];
    std::snprintf(line, sizeof line, "%.17g %.17g %.17g %.17g %.17g %.17g\n",
                  m.a, m.b, m.c, m.d, m.e, m.f);
    out << line;
    out.flush();
    if (!out)
        throw IoError("write failed: " + path.string());
}

inline Affine read_affine(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path.string());
    Affine m;
    if (!(in >> m.a >> m.b >> m.c >> m.d >> m.e >> m.f))
        throw FormatError("bad affine sidecar: " + path.string());
    return m;
}

}  // namespace cadt
