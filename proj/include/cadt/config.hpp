#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "detect.hpp"
#include "types.hpp"

namespace cadt {

namespace detail {

inline std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double config_double(const std::string& key, const std::string& value) {
    size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != value.size())
        throw FormatError("config: bad number for " + key + ": '" + value + "'");
    return v;
}

inline int config_int(const std::string& key, const std::string& value) {
    size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(value, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != value.size())
        throw FormatError("config: bad integer for " + key + ": '" + value + "'");
    return v;
}

}  // namespace detail

// Flat "key = value" settings, one per line, '#' starts a comment. Returned
// in file order as pairs so later duplicates win when applied.
inline std::vector<std::pair<std::string, std::string>> parse_config_file(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config " + path.string());
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw FormatError("config: line " + std::to_string(lineno) +
                              " has no '='");
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty())
            throw FormatError("config: line " + std::to_string(lineno) +
                              " has an empty key");
        out.emplace_back(key, value);
    }
    return out;
}

// Applies settings onto the pipeline. Unknown keys are errors so typos do
// not quietly run with defaults. matching_radius lands in *radius when a
// caller provides one.
inline void apply_config(
    const std::vector<std::pair<std::string, std::string>>& settings,
    PipelineConfig& cfg, double* radius = nullptr) {
    using detail::config_double;
    using detail::config_int;
    for (const auto& [key, value] : settings) {
        if (key == "canny_sigma") cfg.canny.sigma = config_double(key, value);
        else if (key == "canny_low") cfg.canny.low = config_double(key, value);
        else if (key == "canny_high") cfg.canny.high = config_double(key, value);
        else if (key == "canny_high_percentile")
            cfg.canny.high_percentile = config_double(key, value);
        else if (key == "canny_low_ratio")
            cfg.canny.low_ratio = config_double(key, value);
        else if (key == "curve_sigma") cfg.curve_sigma = config_double(key, value);
        else if (key == "min_curve_length")
            cfg.min_curve_length = config_int(key, value);
        else if (key == "cpda_chords") {
            std::stringstream ss(value);
            std::string item;
            std::vector<int> chords;
            while (std::getline(ss, item, ','))
                chords.push_back(config_int(key, detail::trim(item)));
            if (chords.size() != 3)
                throw FormatError("config: cpda_chords needs exactly 3 values");
            cfg.detector.cpda_chords = {chords[0], chords[1], chords[2]};
        } else if (key == "cpda_curvature_threshold")
            cfg.detector.cpda_curvature_threshold = config_double(key, value);
        else if (key == "cpda_angle_threshold")
            cfg.detector.cpda_angle_threshold = config_double(key, value);
        else if (key == "ctar_k") cfg.detector.ctar_k = config_int(key, value);
        else if (key == "ctar_threshold")
            cfg.detector.ctar_threshold = config_double(key, value);
        else if (key == "ctaa_k") cfg.detector.ctaa_k = config_int(key, value);
        else if (key == "ctaa_threshold")
            cfg.detector.ctaa_threshold = config_double(key, value);
        else if (key == "cadt_l") cfg.detector.cadt_l = config_int(key, value);
        else if (key == "cadt_threshold")
            cfg.detector.cadt_threshold = config_double(key, value);
        else if (key == "tjunction_min_distance")
            cfg.detector.tjunction_min_distance = config_double(key, value);
        else if (key == "matching_radius") {
            double r = config_double(key, value);
            if (radius) *radius = r;
        } else
            throw FormatError("config: unknown key '" + key + "'");
    }
}

inline void load_config_file(const std::filesystem::path& path,
                             PipelineConfig& cfg, double* radius = nullptr) {
    apply_config(parse_config_file(path), cfg, radius);
}

}  // namespace cadt
