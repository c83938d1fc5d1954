#include "persona/image/image.hpp"

#include <cmath>

#include <opencv2/imgcodecs.hpp>

#include "persona/util/text.hpp"

namespace persona::image {

RgbImage decode_image(std::span<const std::uint8_t> bytes) {
    if (bytes.empty()) throw DataError("cannot decode an empty image");
    const cv::Mat buf(1, static_cast<int>(bytes.size()), CV_8UC1, const_cast<std::uint8_t*>(bytes.data()));
    const cv::Mat bgr = cv::imdecode(buf, cv::IMREAD_COLOR);
    if (bgr.empty()) throw DataError("image could not be decoded");
    RgbImage out(bgr.cols, bgr.rows);
    for (int y = 0; y < bgr.rows; ++y) {
        const auto* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < bgr.cols; ++x) out(x, y) = Rgb{row[x][2], row[x][1], row[x][0]};
    }
    return out;
}

RgbImage read_image(const std::string& path) {
    const auto bytes = util::read_file(path);
    return decode_image({reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()});
}

std::vector<std::uint8_t> encode_jpeg(const RgbImage& image, const JpegOptions& options) {
    if (image.empty()) throw DataError("cannot encode an empty image");
    cv::Mat bgr(image.height(), image.width(), CV_8UC3);
    for (int y = 0; y < image.height(); ++y) {
        auto* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < image.width(); ++x) {
            const auto p = image(x, y);
            row[x] = cv::Vec3b(p.b, p.g, p.r);
        }
    }
    std::vector<std::uint8_t> out;
    const std::vector<int> params{cv::IMWRITE_JPEG_QUALITY, options.quality, cv::IMWRITE_JPEG_PROGRESSIVE,
                                  options.progressive ? 1 : 0};
    if (!cv::imencode(".jpg", bgr, out, params)) throw InvariantError("JPEG encoding failed");
    return out;
}

GrayImage to_gray(const RgbImage& image) {
    GrayImage out(image.width(), image.height());
    for (std::size_t i = 0; i < image.size(); ++i) {
        const auto p = image.pixels()[i];
        // Fixed-point BT.601 weights (sum 1000) keep the conversion exact.
        const int v = (299 * p.r + 587 * p.g + 114 * p.b + 500) / 1000;
        out.pixels()[i] = static_cast<std::uint8_t>(v);
    }
    return out;
}

int reflect101(int i, int n) noexcept {
    if (n == 1) return 0;
    while (i < 0 || i >= n) i = i < 0 ? -i : 2 * n - 2 - i;
    return i;
}

image::RealPlane gaussian_blur(const image::RealPlane& src, double sigma) {
    if (sigma <= 0) return src;
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> k(2 * radius + 1);
    double norm = 0;
    for (int i = -radius; i <= radius; ++i) norm += k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    for (auto& v : k) v /= norm;

    const int w = src.width(), h = src.height();
    image::RealPlane tmp(w, h), out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = k[radius] * src(x, y);
            for (int i = 1; i <= radius; ++i)
                acc += k[radius + i] * (src(reflect101(x - i, w), y) + src(reflect101(x + i, w), y));
            tmp(x, y) = acc;
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = k[radius] * tmp(x, y);
            for (int i = 1; i <= radius; ++i)
                acc += k[radius + i] * (tmp(x, reflect101(y - i, h)) + tmp(x, reflect101(y + i, h)));
            out(x, y) = acc;
        }
    return out;
}

RgbImage mirror_horizontal(const RgbImage& image) {
    RgbImage out(image.width(), image.height());
    for (int y = 0; y < image.height(); ++y)
        for (int x = 0; x < image.width(); ++x) out(image.width() - 1 - x, y) = image(x, y);
    return out;
}

RgbImage rotate_180(const RgbImage& image) {
    RgbImage out(image.width(), image.height());
    for (int y = 0; y < image.height(); ++y)
        for (int x = 0; x < image.width(); ++x) out(image.width() - 1 - x, image.height() - 1 - y) = image(x, y);
    return out;
}

}  // namespace persona::image
