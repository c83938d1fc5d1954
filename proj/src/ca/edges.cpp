#include "persona/ca/edges.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace persona::ca {
namespace {

using image::reflect101;

}  // namespace

int otsu_threshold(const image::GrayImage& gray) {
    std::array<double, 256> hist{};
    for (auto v : gray.pixels()) hist[v] += 1.0;
    const double total = static_cast<double>(gray.size());
    double sum_all = 0;
    for (int i = 0; i < 256; ++i) sum_all += i * hist[i];

    double w0 = 0, sum0 = 0, best = -1;
    int threshold = 0;
    for (int t = 0; t < 256; ++t) {
        w0 += hist[t];
        sum0 += t * hist[t];
        const double w1 = total - w0;
        if (w0 == 0 || w1 == 0) continue;
        const double mu0 = sum0 / w0, mu1 = (sum_all - sum0) / w1;
        const double between = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (between > best) {
            best = between;
            threshold = t;
        }
    }
    return threshold;
}

image::GrayImage canny(const image::GrayImage& gray, const CannyOptions& options) {
    const int w = gray.width(), h = gray.height();
    image::GrayImage edges(w, h, 0);
    if (w < 3 || h < 3) return edges;

    const auto smooth = image::gaussian_blur(image::to_real(gray), options.sigma);
    image::RealPlane mag(w, h);
    image::Plane<std::uint8_t> sector(w, h);
    constexpr double tan22 = 0.41421356237309504880;  // tan(pi/8)
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            auto s = [&](int dx, int dy) { return smooth(reflect101(x + dx, w), reflect101(y + dy, h)); };
            const double gx = ((s(1, -1) + s(1, 1)) + 2 * s(1, 0)) - ((s(-1, -1) + s(-1, 1)) + 2 * s(-1, 0));
            const double gy = ((s(-1, 1) + s(1, 1)) + 2 * s(0, 1)) - ((s(-1, -1) + s(1, -1)) + 2 * s(0, -1));
            mag(x, y) = std::hypot(gx, gy);
            const double ax = std::abs(gx), ay = std::abs(gy);
            // 0: horizontal gradient, 2: vertical, 1/3: the two diagonals.
            if (ay <= tan22 * ax)
                sector(x, y) = 0;
            else if (ax <= tan22 * ay)
                sector(x, y) = 2;
            else
                sector(x, y) = (gx > 0) == (gy > 0) ? 1 : 3;
        }

    const double high = options.high_threshold.value_or(static_cast<double>(otsu_threshold(gray)));
    const double low = options.low_ratio * high;
    constexpr int off[4][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}};

    // 2 = strong, 1 = weak candidate.
    image::GrayImage cls(w, h, 0);
    std::vector<std::pair<int, int>> stack;
    for (int y = 1; y < h - 1; ++y)
        for (int x = 1; x < w - 1; ++x) {
            const double m = mag(x, y);
            if (m <= 0 || m < low) continue;
            const auto* d = off[sector(x, y)];
            if (m < mag(x + d[0], y + d[1]) || m < mag(x - d[0], y - d[1])) continue;
            if (m >= high && m > 0) {
                cls(x, y) = 2;
                stack.emplace_back(x, y);
            } else {
                cls(x, y) = 1;
            }
        }
    // Hysteresis: keep weak pixels 8-connected to a strong one.
    for (auto [x, y] : stack) edges(x, y) = 1;
    while (!stack.empty()) {
        const auto [x, y] = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                const int nx = x + dx, ny = y + dy;
                if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                if (cls(nx, ny) == 1 && !edges(nx, ny)) {
                    edges(nx, ny) = 1;
                    stack.emplace_back(nx, ny);
                }
            }
    }
    return edges;
}

double edge_fraction(const image::GrayImage& gray, const CannyOptions& options) {
    if (gray.empty()) return 0.0;
    const auto e = canny(gray, options);
    std::size_t count = 0;
    for (auto v : e.pixels()) count += v;
    return static_cast<double>(count) / static_cast<double>(gray.size());
}

}  // namespace persona::ca
