#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "persona/ca/color.hpp"
#include "persona/ca/edges.hpp"
#include "persona/ca/faces.hpp"
#include "persona/ca/hsv.hpp"
#include "persona/ca/segmentation.hpp"

namespace persona::ca {

inline constexpr std::size_t kCompositionFeatures = 9;
inline constexpr std::size_t kTextureFeatures = 52;
inline constexpr std::size_t kFaceFeatures = 1;
static_assert(kColorFeatures + kCompositionFeatures + kTextureFeatures + kFaceFeatures == 82);

/// Smallest side accepted by the texture block (three Haar levels).
inline constexpr int kMinSide = 8;

/// edge fraction, region count, mean region size, low DOF (H, S, V),
/// rule-of-thirds mean S, rule-of-thirds mean V, image size (w + h).
std::array<double, kCompositionFeatures> composition_features(const HsvImage& hsv, const image::RgbImage& rgb,
                                                              const MeanShiftOptions& segmentation = {},
                                                              const CannyOptions& edges = {});

/// entropy, wavelets (H1 H2 H3 S1 S2 S3 V1 V2 V3 sumH sumS sumV),
/// Tamura (coarseness, contrast, directionality),
/// GLCM (contrast, correlation, energy, homogeneity) x (H, S, V), GIST (24).
std::array<double, kTextureFeatures> texture_features(const HsvImage& hsv, const image::GrayImage& gray);

/// Inner rectangle used by the rule-of-thirds features: the central third
/// of each axis, [lo, hi).
struct ThirdsWindow {
    int x0, x1, y0, y1;
};
ThirdsWindow central_third(int width, int height) noexcept;

std::vector<std::string> ca_feature_names();

/// Bundles the configuration one CA extraction needs. Owns a face detector,
/// so use one extractor per thread.
class CaExtractor {
public:
    CaExtractor(const std::filesystem::path& cascade_path, ColorNameTable color_names);

    std::vector<double> extract(const image::RgbImage& rgb);
    std::vector<double> extract(std::span<const std::uint8_t> jpeg_bytes);

private:
    FaceDetector faces_;
    ColorNameTable names_;
};

}  // namespace persona::ca
