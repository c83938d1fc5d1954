#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "persona/ca/hsv.hpp"

namespace persona::ca {

struct Lab {
    double l = 0, a = 0, b = 0;
};

/// sRGB (D65) to CIELab.
Lab srgb_to_lab(image::Rgb p) noexcept;

inline constexpr std::size_t kColorNames = 11;

/// Prototype CIELab coordinates for the eleven basic color terms, in the order
/// black, blue, brown, green, gray, orange, pink, purple, red, white, yellow.
class ColorNameTable {
public:
    struct Entry {
        std::string name;
        Lab lab;
    };

    static ColorNameTable defaults();
    /// Reads "name,L,a,b" lines (header and '#' comments allowed). All eleven
    /// names must be present; rows may come in any order.
    static ColorNameTable load(const std::filesystem::path& path);
    static ColorNameTable parse(std::string_view text);

    const std::array<Entry, kColorNames>& entries() const noexcept { return entries_; }
    /// Index of the prototype nearest to `lab`; ties go to the lower index.
    std::size_t nearest(const Lab& lab) const noexcept;

private:
    std::array<Entry, kColorNames> entries_;
};

inline constexpr std::size_t kColorFeatures = 20;

/// Emotion coordinates from mean brightness and saturation.
struct Emotion {
    double valence = 0, arousal = 0, dominance = 0;
};
Emotion emotion_from_means(double mean_v, double mean_s) noexcept;

/// 4x4x4 RGB histogram (bin = channel / 64), normalized to sum 1,
/// index r*16 + g*4 + b.
std::array<double, 64> rgb_histogram_64(const image::RgbImage& rgb);

/// EMD between a 64-bin histogram and the uniform one, ground distance =
/// Euclidean distance between bin-index coordinates.
double color_diversity(const std::array<double, 64>& histogram);

/// Layout: mean S, std S, std V, circular variance of H, mean V,
/// valence, arousal, dominance, EMD to uniform, 11 color-name fractions.
std::array<double, kColorFeatures> color_features(const HsvImage& hsv, const image::RgbImage& rgb,
                                                  const ColorNameTable& names);

}  // namespace persona::ca
