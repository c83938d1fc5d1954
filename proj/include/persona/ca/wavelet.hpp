#pragma once

#include <vector>

#include "persona/image/image.hpp"

namespace persona::ca {

struct HaarLevel {
    image::RealPlane lh, hl, hh;  // horizontal, vertical, diagonal detail
};

/// levels[0] is the finest level.
struct HaarDecomposition {
    std::vector<HaarLevel> levels;
    image::RealPlane approximation;
};

/// Orthonormal 2-D Haar (Daubechies-1) transform. Both dimensions must be
/// divisible by 2^levels.
HaarDecomposition haar_decompose(const image::RealPlane& plane, int levels);

/// Centered crop to the largest size divisible by `multiple` in both axes.
image::RealPlane center_crop_to_multiple(const image::RealPlane& plane, int multiple);

/// Mean absolute detail coefficient over the three bands of one level.
double mean_abs_detail(const HaarLevel& level);

/// Share of level-3 detail energy (sum of squared coefficients) inside the
/// central 2x2 blocks of a 4x4 partition. 0 when there is no detail at all.
double low_depth_of_field(const image::RealPlane& channel);

}  // namespace persona::ca
