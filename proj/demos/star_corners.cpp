// Render a five-pointed star, run all four detectors on it, and print how
// many of the ten true vertices each one recovers within a 3-pixel radius.

#include <cstdio>

#include <cadt/cadt.hpp>

int main() {
    cadt::SynthShape star = cadt::make_star("star", {128.0, 128.0}, 84.0, 12.0);
    cadt::Preprocessed pre = cadt::preprocess(star.image, {});
    std::printf("star: %zu curve(s), %zu known vertices\n",
                pre.curves.size(), star.vertices.size());

    for (cadt::Method m : cadt::kAllMethods) {
        auto corners = cadt::detect_on_curves(pre.curves, pre.junctions, m,
                                              cadt::DetectorConfig{});
        int hits = 0;
        for (const auto& v : star.vertices) {
            for (const auto& c : corners) {
                double dx = c.x - v.x;
                double dy = c.y - v.y;
                if (dx * dx + dy * dy <= 9.0) {
                    ++hits;
                    break;
                }
            }
        }
        std::printf("%-5s %2zu corners, %2d/%zu vertices hit\n",
                    cadt::method_name(m), corners.size(), hits,
                    star.vertices.size());
    }
    return 0;
}
