#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "persona/image/image.hpp"
#include "persona/util/rng.hpp"

namespace persona::testkit {

inline image::RgbImage random_rgb(int w, int h, std::uint64_t seed) {
    util::Rng rng(seed);
    image::RgbImage img(w, h);
    for (auto& p : img.pixels())
        p = {static_cast<std::uint8_t>(rng() & 0xFF), static_cast<std::uint8_t>(rng() & 0xFF),
             static_cast<std::uint8_t>(rng() & 0xFF)};
    return img;
}

/// Smooth blobs plus noise; gives segmentation and edges something to find.
inline image::RgbImage blob_rgb(int w, int h, std::uint64_t seed) {
    util::Rng rng(seed);
    image::RgbImage img(w, h);
    const double cx = w * (0.3 + 0.4 * util::uniform01(rng)), cy = h * (0.3 + 0.4 * util::uniform01(rng));
    const double r = std::min(w, h) * (0.15 + 0.2 * util::uniform01(rng));
    const std::uint8_t base[3] = {static_cast<std::uint8_t>(rng() & 0xFF), static_cast<std::uint8_t>(rng() & 0xFF),
                                  static_cast<std::uint8_t>(rng() & 0xFF)};
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const bool inside = (x - cx) * (x - cx) + (y - cy) * (y - cy) < r * r;
            auto c = [&](int k) {
                const int v = inside ? 255 - base[k] : base[k];
                return static_cast<std::uint8_t>(std::clamp(v + static_cast<int>(util::uniform_index(rng, 9)) - 4, 0, 255));
            };
            img(x, y) = {c(0), c(1), c(2)};
        }
    return img;
}

inline image::GrayImage random_gray(int w, int h, std::uint64_t seed, int levels = 256) {
    util::Rng rng(seed);
    image::GrayImage img(w, h);
    for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(util::uniform_index(rng, static_cast<std::uint64_t>(levels)));
    return img;
}

inline std::span<const std::uint8_t> bytes_of(const std::string& s) {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        util::Rng rng(std::random_device{}());
        path_ = std::filesystem::temp_directory_path() / ("persona_" + tag + "_" + std::to_string(rng() % 1000000007ULL));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

private:
    std::filesystem::path path_;
};

}  // namespace persona::testkit
