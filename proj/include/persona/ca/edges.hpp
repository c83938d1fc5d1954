#pragma once

#include <optional>

#include "persona/image/image.hpp"

namespace persona::ca {

/// Otsu's threshold: the level t maximizing between-class variance when the
/// classes are {<= t} and {> t}. Returns 0 for a single-level image.
int otsu_threshold(const image::GrayImage& gray);

struct CannyOptions {
    double sigma = 1.4;
    double low_ratio = 0.4;
    /// Gradient-magnitude high threshold; Otsu's intensity threshold when unset.
    std::optional<double> high_threshold;
};

/// Binary edge map (1 = edge). Non-maximum suppression compares with >= on
/// both sides along the gradient, so the result commutes with 180-degree rotation.
image::GrayImage canny(const image::GrayImage& gray, const CannyOptions& options = {});

double edge_fraction(const image::GrayImage& gray, const CannyOptions& options = {});

}  // namespace persona::ca
