#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

namespace testutil {

// Fresh directory under the system temp root, removed when the guard dies.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        std::mt19937_64 rng(std::random_device{}());
        path = std::filesystem::temp_directory_path() /
               (tag + "-" + std::to_string(rng()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

}  // namespace testutil
