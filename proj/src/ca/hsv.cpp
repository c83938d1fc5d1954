#include "persona/ca/hsv.hpp"

#include <algorithm>
#include <cmath>

namespace persona::ca {

Hsv rgb_to_hsv(image::Rgb p) noexcept {
    const int r = p.r, g = p.g, b = p.b;
    const int mx = std::max({r, g, b});
    const int mn = std::min({r, g, b});
    const double delta = mx - mn;
    Hsv out;
    out.v = mx / 255.0;
    out.s = mx == 0 ? 0.0 : delta / mx;
    if (delta == 0) return out;

    double sector;  // hue in units of 60 degrees
    if (mx == r)
        sector = std::fmod((g - b) / delta + 6.0, 6.0);
    else if (mx == g)
        sector = (b - r) / delta + 2.0;
    else
        sector = (r - g) / delta + 4.0;
    out.h = sector * (kTwoPi / 6.0);
    if (out.h >= kTwoPi) out.h -= kTwoPi;
    return out;
}

HsvImage rgb_to_hsv(const image::RgbImage& rgb) {
    if (rgb.empty()) throw DataError("cannot convert an empty image to HSV");
    HsvImage out{image::RealPlane(rgb.width(), rgb.height()), image::RealPlane(rgb.width(), rgb.height()),
                 image::RealPlane(rgb.width(), rgb.height())};
    for (std::size_t i = 0; i < rgb.size(); ++i) {
        const auto hsv = rgb_to_hsv(rgb.pixels()[i]);
        out.hue.pixels()[i] = hsv.h;
        out.saturation.pixels()[i] = hsv.s;
        out.value.pixels()[i] = hsv.v;
    }
    return out;
}

image::RealPlane HsvImage::hue_unit() const {
    image::RealPlane out(width(), height());
    for (std::size_t i = 0; i < hue.size(); ++i) out.pixels()[i] = hue.pixels()[i] / kTwoPi;
    return out;
}

}  // namespace persona::ca
