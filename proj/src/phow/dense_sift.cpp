#include "persona/phow/phow.hpp"

#include <algorithm>
#include <cmath>

namespace persona::phow {
namespace {

constexpr int kOrientations = 8;
constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Summed-area table over one orientation plane.
class Integral {
public:
    Integral(int w, int h) : w_(w), sat_(static_cast<std::size_t>(w + 1) * (h + 1), 0.0) {}
    double& at(int x, int y) { return sat_[static_cast<std::size_t>(y) * (w_ + 1) + x]; }
    double at(int x, int y) const { return sat_[static_cast<std::size_t>(y) * (w_ + 1) + x]; }
    double box(int x0, int y0, int x1, int y1) const { return at(x1, y1) - at(x0, y1) - at(x1, y0) + at(x0, y0); }

private:
    int w_;
    std::vector<double> sat_;
};

void normalize(Descriptor& d) {
    auto l2 = [&] {
        double s = 0;
        for (double v : d) s += v * v;
        return std::sqrt(s);
    };
    double n = l2();
    if (n < 1e-10) {
        d.fill(0.0);
        return;
    }
    for (auto& v : d) v = std::min(v / n, 0.2);
    n = l2();
    for (auto& v : d) v /= n;
}

}  // namespace

std::vector<SiftFrame> dense_sift(const image::RealPlane& gray, int bin_size, int step) {
    if (bin_size < 1 || step < 1) throw UsageError("dense SIFT needs positive bin size and step");
    const int w = gray.width(), h = gray.height();
    if (std::min(w, h) < 4 * bin_size)
        throw TooSmallError("image side " + std::to_string(std::min(w, h)) + " is below 4 x bin size " +
                            std::to_string(bin_size));

    const auto smooth = image::gaussian_blur(gray, bin_size / 6.0);
    std::vector<Integral> planes(kOrientations, Integral(w, h));
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double gx = (smooth.clamped(x + 1, y) - smooth.clamped(x - 1, y)) / 2.0;
            const double gy = (smooth.clamped(x, y + 1) - smooth.clamped(x, y - 1)) / 2.0;
            const double mag = std::hypot(gx, gy);
            std::array<double, kOrientations> vote{};
            if (mag > 0) {
                double angle = std::atan2(gy, gx);
                if (angle < 0) angle += kTwoPi;
                const double t = angle / kTwoPi * kOrientations;
                const int b0 = static_cast<int>(std::floor(t)) % kOrientations;
                const double frac = t - std::floor(t);
                vote[b0] += mag * (1.0 - frac);
                vote[(b0 + 1) % kOrientations] += mag * frac;
            }
            for (int o = 0; o < kOrientations; ++o) {
                auto& p = planes[o];
                p.at(x + 1, y + 1) = vote[o] + p.at(x, y + 1) + p.at(x + 1, y) - p.at(x, y);
            }
        }

    const int nx = grid_count(w, bin_size, step), ny = grid_count(h, bin_size, step);
    std::vector<SiftFrame> frames;
    frames.reserve(static_cast<std::size_t>(nx) * ny);
    for (int gy = 0; gy < ny; ++gy)
        for (int gx = 0; gx < nx; ++gx) {
            const int x0 = gx * step, y0 = gy * step;
            SiftFrame f;
            f.x = x0 + 2.0 * bin_size - 0.5;
            f.y = y0 + 2.0 * bin_size - 0.5;
            for (int cy = 0; cy < 4; ++cy)
                for (int cx = 0; cx < 4; ++cx) {
                    const int ax = x0 + cx * bin_size, ay = y0 + cy * bin_size;
                    for (int o = 0; o < kOrientations; ++o)
                        f.descriptor[(cy * 4 + cx) * kOrientations + o] =
                            std::max(0.0, planes[o].box(ax, ay, ax + bin_size, ay + bin_size));
                }
            normalize(f.descriptor);
            frames.push_back(f);
        }
    return frames;
}

}  // namespace persona::phow
