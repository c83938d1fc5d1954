#pragma once

#include <array>
#include <vector>

#include "persona/image/image.hpp"

namespace persona::ca {

/// Shannon entropy (bits) of the 256-bin gray-level histogram.
double gray_entropy(const image::GrayImage& gray);

/// Maps values in [0,1] to integer levels 0..levels-1.
image::Plane<int> quantize_unit(const image::RealPlane& unit, int levels);

/// Symmetric, normalized gray-level co-occurrence matrix for offset (dx, dy),
/// row-major levels x levels.
std::vector<double> glcm(const image::Plane<int>& quantized, int levels, int dx, int dy);

struct GlcmStats {
    double contrast = 0;
    double correlation = 0;  // 1 when the matrix has zero variance
    double energy = 0;       // angular second moment
    double homogeneity = 0;  // sum p / (1 + (i-j)^2)
};

GlcmStats glcm_stats(const std::vector<double>& p, int levels);

inline constexpr int kGlcmLevels = 16;

struct TamuraFeatures {
    double coarseness = 0;
    double contrast = 0;
    double directionality = 0;
};

TamuraFeatures tamura(const image::RealPlane& gray);
double tamura_contrast(const image::RealPlane& gray);

inline constexpr int kGistScales = 3;
inline constexpr int kGistOrientations = 8;

/// Mean Gabor response magnitude per (scale, orientation), scale-major.
/// Centre frequencies 0.25, 0.125, 0.0625 cycles/pixel; orientations k*pi/8.
std::array<double, kGistScales * kGistOrientations> gist(const image::RealPlane& gray_unit);

}  // namespace persona::ca
