#pragma once

#include "persona/image/image.hpp"

namespace persona::ca {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Hexcone HSV planes. Hue is in radians, [0, 2pi); pixels with S = 0 carry hue 0.
struct HsvImage {
    image::RealPlane hue;
    image::RealPlane saturation;
    image::RealPlane value;

    int width() const noexcept { return hue.width(); }
    int height() const noexcept { return hue.height(); }

    /// Hue rescaled to [0, 1) so all three channels share a range.
    image::RealPlane hue_unit() const;
};

struct Hsv {
    double h = 0, s = 0, v = 0;
};

Hsv rgb_to_hsv(image::Rgb p) noexcept;
HsvImage rgb_to_hsv(const image::RgbImage& image);

}  // namespace persona::ca
