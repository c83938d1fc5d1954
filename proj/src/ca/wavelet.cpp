#include "persona/ca/wavelet.hpp"

#include <cmath>

namespace persona::ca {

HaarDecomposition haar_decompose(const image::RealPlane& plane, int levels) {
    const int step = 1 << levels;
    if (plane.empty() || plane.width() % step != 0 || plane.height() % step != 0)
        throw DataError("Haar transform needs dimensions divisible by " + std::to_string(step));
    HaarDecomposition out;
    image::RealPlane current = plane;
    for (int l = 0; l < levels; ++l) {
        const int w = current.width() / 2, h = current.height() / 2;
        HaarLevel level{image::RealPlane(w, h), image::RealPlane(w, h), image::RealPlane(w, h)};
        image::RealPlane approx(w, h);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const double a = current(2 * x, 2 * y), b = current(2 * x + 1, 2 * y);
                const double c = current(2 * x, 2 * y + 1), d = current(2 * x + 1, 2 * y + 1);
                // Grouped so a mirrored input yields exactly mirrored coefficients.
                approx(x, y) = ((a + b) + (c + d)) / 2.0;
                level.lh(x, y) = ((a + c) - (b + d)) / 2.0;
                level.hl(x, y) = ((a + b) - (c + d)) / 2.0;
                level.hh(x, y) = ((a + d) - (b + c)) / 2.0;
            }
        out.levels.push_back(std::move(level));
        current = std::move(approx);
    }
    out.approximation = std::move(current);
    return out;
}

image::RealPlane center_crop_to_multiple(const image::RealPlane& plane, int multiple) {
    const int w = plane.width() / multiple * multiple, h = plane.height() / multiple * multiple;
    if (w == 0 || h == 0) throw TooSmallError("image smaller than " + std::to_string(multiple) + " pixels");
    const int x0 = (plane.width() - w) / 2, y0 = (plane.height() - h) / 2;
    image::RealPlane out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) out(x, y) = plane(x0 + x, y0 + y);
    return out;
}

double mean_abs_detail(const HaarLevel& level) {
    double sum = 0;
    for (const auto* band : {&level.lh, &level.hl, &level.hh})
        for (double v : band->pixels()) sum += std::abs(v);
    return sum / (3.0 * static_cast<double>(level.lh.size()));
}

double low_depth_of_field(const image::RealPlane& channel) {
    const auto dec = haar_decompose(center_crop_to_multiple(channel, 8), 3);
    const auto& l3 = dec.levels[2];
    const int w = l3.lh.width(), h = l3.lh.height();
    double centre = 0, total = 0;
    for (int y = 0; y < h; ++y) {
        const int by = 4 * y / h;
        for (int x = 0; x < w; ++x) {
            const int bx = 4 * x / w;
            const double e = l3.lh(x, y) * l3.lh(x, y) + l3.hl(x, y) * l3.hl(x, y) + l3.hh(x, y) * l3.hh(x, y);
            total += e;
            if ((bx == 1 || bx == 2) && (by == 1 || by == 2)) centre += e;
        }
    }
    return total > 0 ? centre / total : 0.0;
}

}  // namespace persona::ca
