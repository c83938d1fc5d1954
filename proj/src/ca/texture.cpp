#include "persona/ca/texture.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <opencv2/core.hpp>

#include "persona/ca/hsv.hpp"

namespace persona::ca {

double gray_entropy(const image::GrayImage& gray) {
    if (gray.empty()) throw DataError("entropy of an empty image");
    std::array<std::size_t, 256> hist{};
    for (auto v : gray.pixels()) ++hist[v];
    const double n = static_cast<double>(gray.size());
    double h = 0;
    for (auto c : hist)
        if (c > 0) {
            const double p = static_cast<double>(c) / n;
            h -= p * std::log2(p);
        }
    return h;
}

image::Plane<int> quantize_unit(const image::RealPlane& unit, int levels) {
    image::Plane<int> out(unit.width(), unit.height());
    for (std::size_t i = 0; i < unit.size(); ++i) {
        const int q = static_cast<int>(std::floor(unit.pixels()[i] * levels));
        out.pixels()[i] = std::clamp(q, 0, levels - 1);
    }
    return out;
}

std::vector<double> glcm(const image::Plane<int>& q, int levels, int dx, int dy) {
    std::vector<double> p(static_cast<std::size_t>(levels) * levels, 0.0);
    double total = 0;
    for (int y = 0; y < q.height(); ++y)
        for (int x = 0; x < q.width(); ++x) {
            const int x2 = x + dx, y2 = y + dy;
            if (x2 < 0 || y2 < 0 || x2 >= q.width() || y2 >= q.height()) continue;
            const int i = q(x, y), j = q(x2, y2);
            p[i * levels + j] += 1.0;
            p[j * levels + i] += 1.0;
            total += 2.0;
        }
    if (total == 0) throw TooSmallError("image too small for a co-occurrence offset");
    for (auto& v : p) v /= total;
    return p;
}

GlcmStats glcm_stats(const std::vector<double>& p, int levels) {
    GlcmStats s;
    double mu = 0;
    for (int i = 0; i < levels; ++i)
        for (int j = 0; j < levels; ++j) mu += i * p[i * levels + j];
    double var = 0, cov = 0;
    for (int i = 0; i < levels; ++i)
        for (int j = 0; j < levels; ++j) {
            const double v = p[i * levels + j];
            const double d = i - j;
            s.contrast += d * d * v;
            s.energy += v * v;
            s.homogeneity += v / (1.0 + d * d);
            var += (i - mu) * (i - mu) * v;
            cov += (i - mu) * (j - mu) * v;
        }
    s.correlation = var > 1e-15 ? cov / var : 1.0;
    return s;
}

namespace {

/// Box mean over [x0, x1) x [y0, y1) clipped to the image, via an integral image.
class BoxMean {
public:
    explicit BoxMean(const image::RealPlane& p) : w_(p.width()), h_(p.height()), sat_((w_ + 1) * (h_ + 1), 0.0) {
        for (int y = 0; y < h_; ++y)
            for (int x = 0; x < w_; ++x)
                at(x + 1, y + 1) = p(x, y) + at(x, y + 1) + at(x + 1, y) - at(x, y);
    }
    double operator()(int x0, int y0, int x1, int y1) const {
        x0 = std::clamp(x0, 0, w_);
        x1 = std::clamp(x1, 0, w_);
        y0 = std::clamp(y0, 0, h_);
        y1 = std::clamp(y1, 0, h_);
        const double area = static_cast<double>(x1 - x0) * (y1 - y0);
        if (area <= 0) return 0.0;
        return (at(x1, y1) - at(x0, y1) - at(x1, y0) + at(x0, y0)) / area;
    }

private:
    double& at(int x, int y) { return sat_[static_cast<std::size_t>(y) * (w_ + 1) + x]; }
    double at(int x, int y) const { return sat_[static_cast<std::size_t>(y) * (w_ + 1) + x]; }
    int w_, h_;
    std::vector<double> sat_;
};

double tamura_coarseness(const image::RealPlane& g) {
    const int w = g.width(), h = g.height();
    const int side = std::min(w, h);
    int kmax = 1;
    while (kmax < 5 && (2 << kmax) <= side) ++kmax;  // window 2^k with room for the +-2^(k-1) offsets
    const BoxMean box(g);
    double total = 0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double best_e = -1;
            int best_k = 1;
            for (int k = 1; k <= kmax; ++k) {
                const int half = 1 << (k - 1);
                auto a = [&](int cx, int cy) { return box(cx - half, cy - half, cx + half, cy + half); };
                const double eh = std::abs(a(x + half, y) - a(x - half, y));
                const double ev = std::abs(a(x, y + half) - a(x, y - half));
                const double e = std::max(eh, ev);
                if (e > best_e + 1e-12) {
                    best_e = e;
                    best_k = k;
                }
            }
            total += static_cast<double>(1 << best_k);
        }
    return total / static_cast<double>(g.size());
}

double tamura_directionality(const image::RealPlane& g) {
    constexpr int kBins = 16;
    constexpr double kThreshold = 12.0;
    constexpr double kPi = 3.14159265358979323846;
    const int w = g.width(), h = g.height();
    std::array<double, kBins> hist{};
    double count = 0;
    for (int y = 1; y + 1 < h; ++y)
        for (int x = 1; x + 1 < w; ++x) {
            const double dh = (g(x + 1, y - 1) + g(x + 1, y) + g(x + 1, y + 1)) - (g(x - 1, y - 1) + g(x - 1, y) + g(x - 1, y + 1));
            const double dv = (g(x - 1, y + 1) + g(x, y + 1) + g(x + 1, y + 1)) - (g(x - 1, y - 1) + g(x, y - 1) + g(x + 1, y - 1));
            if ((std::abs(dh) + std::abs(dv)) / 2.0 < kThreshold) continue;
            double theta = std::atan2(dv, dh);  // edge orientation modulo pi
            if (theta < 0) theta += kPi;
            if (theta >= kPi) theta -= kPi;
            hist[std::min(kBins - 1, static_cast<int>(theta / kPi * kBins))] += 1.0;
            count += 1.0;
        }
    if (count == 0) return 0.0;
    const int peak = static_cast<int>(std::max_element(hist.begin(), hist.end()) - hist.begin());
    // Second moment of the orientation histogram around its dominant peak,
    // circular over pi; 1 for a single orientation, near 0 for uniform spread.
    double moment = 0;
    for (int b = 0; b < kBins; ++b) {
        int d = std::abs(b - peak);
        d = std::min(d, kBins - d);
        const double phi = d * kPi / kBins;
        moment += phi * phi * hist[b] / count;
    }
    const double max_moment = (kPi / 2) * (kPi / 2);
    return std::clamp(1.0 - moment / max_moment, 0.0, 1.0);
}

}  // namespace

double tamura_contrast(const image::RealPlane& g) {
    const double n = static_cast<double>(g.size());
    double mean = 0;
    for (double v : g.pixels()) mean += v;
    mean /= n;
    double m2 = 0, m4 = 0;
    for (double v : g.pixels()) {
        const double d2 = (v - mean) * (v - mean);
        m2 += d2;
        m4 += d2 * d2;
    }
    m2 /= n;
    m4 /= n;
    if (m2 <= 1e-18) return 0.0;
    const double kurtosis = m4 / (m2 * m2);
    return std::sqrt(m2) / std::pow(kurtosis, 0.25);
}

TamuraFeatures tamura(const image::RealPlane& gray) {
    if (gray.width() < 3 || gray.height() < 3) throw TooSmallError("Tamura features need at least 3x3 pixels");
    return TamuraFeatures{tamura_coarseness(gray), tamura_contrast(gray), tamura_directionality(gray)};
}

std::array<double, kGistScales * kGistOrientations> gist(const image::RealPlane& gray_unit) {
    const int w = gray_unit.width(), h = gray_unit.height();
    if (w < 2 || h < 2) throw TooSmallError("GIST needs at least 2x2 pixels");
    double mean = 0;
    for (double v : gray_unit.pixels()) mean += v;
    mean /= static_cast<double>(gray_unit.size());

    cv::Mat src(h, w, CV_64F);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) src.at<double>(y, x) = gray_unit(x, y) - mean;
    cv::Mat spectrum;
    cv::dft(src, spectrum, cv::DFT_COMPLEX_OUTPUT);

    constexpr double kPi = 3.14159265358979323846;
    constexpr double kAngularSigma = (kPi / 16.0) / 1.1774100225154747;  // half height at +-pi/16
    std::array<double, kGistScales * kGistOrientations> out{};
    cv::Mat filtered(h, w, CV_64FC2), response;
    for (int s = 0; s < kGistScales; ++s) {
        const double f0 = 0.25 / (1 << s);
        const double radial_sigma = 0.45 * f0;
        for (int o = 0; o < kGistOrientations; ++o) {
            const double theta0 = o * kPi / kGistOrientations;
            for (int y = 0; y < h; ++y) {
                const double fy = (y <= h / 2 ? y : y - h) / static_cast<double>(h);
                for (int x = 0; x < w; ++x) {
                    const double fx = (x <= w / 2 ? x : x - w) / static_cast<double>(w);
                    const double f = std::hypot(fx, fy);
                    double d = std::atan2(fy, fx) - theta0;
                    d = std::remainder(d, 2 * kPi);
                    const double gain = f == 0 ? 0.0
                                               : std::exp(-0.5 * ((f - f0) / radial_sigma) * ((f - f0) / radial_sigma)) *
                                                     std::exp(-0.5 * (d / kAngularSigma) * (d / kAngularSigma));
                    const auto& z = spectrum.at<cv::Vec2d>(y, x);
                    filtered.at<cv::Vec2d>(y, x) = cv::Vec2d(z[0] * gain, z[1] * gain);
                }
            }
            cv::dft(filtered, response, cv::DFT_INVERSE | cv::DFT_SCALE | cv::DFT_COMPLEX_OUTPUT);
            double sum = 0;
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    const auto& z = response.at<cv::Vec2d>(y, x);
                    sum += std::hypot(z[0], z[1]);
                }
            out[s * kGistOrientations + o] = sum / static_cast<double>(w * h);
        }
    }
    return out;
}

}  // namespace persona::ca
