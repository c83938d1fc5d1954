#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "persona/error.hpp"

namespace persona::image {

/// Dense row-major 2-D grid of samples.
template <typename T>
class Plane {
public:
    Plane() = default;
    Plane(int width, int height, T fill = T{})
        : width_(width), height_(height), data_(static_cast<std::size_t>(checked_area(width, height)), fill) {}

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(int x, int y) noexcept { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    const T& operator()(int x, int y) const noexcept { return data_[static_cast<std::size_t>(y) * width_ + x]; }

    /// Sample with coordinates clamped to the border.
    const T& clamped(int x, int y) const noexcept {
        x = x < 0 ? 0 : (x >= width_ ? width_ - 1 : x);
        y = y < 0 ? 0 : (y >= height_ ? height_ - 1 : y);
        return (*this)(x, y);
    }

    std::span<T> pixels() noexcept { return data_; }
    std::span<const T> pixels() const noexcept { return data_; }

    bool operator==(const Plane&) const = default;

private:
    static long long checked_area(int w, int h) {
        if (w < 0 || h < 0) throw DataError("negative image dimensions");
        return static_cast<long long>(w) * h;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

using GrayImage = Plane<std::uint8_t>;
using RealPlane = Plane<double>;

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

using RgbImage = Plane<Rgb>;

/// Decodes a JPEG (any format OpenCV's imgcodecs reads) to 8-bit RGB.
RgbImage decode_image(std::span<const std::uint8_t> bytes);
RgbImage read_image(const std::string& path);

struct JpegOptions {
    int quality = 90;
    bool progressive = false;
};

std::vector<std::uint8_t> encode_jpeg(const RgbImage& image, const JpegOptions& options = {});

/// ITU-R BT.601 luma, rounded to the nearest integer.
GrayImage to_gray(const RgbImage& image);

template <typename T>
RealPlane to_real(const Plane<T>& p, double scale = 1.0) {
    RealPlane out(p.width(), p.height());
    for (std::size_t i = 0; i < p.size(); ++i) out.pixels()[i] = static_cast<double>(p.pixels()[i]) * scale;
    return out;
}

/// Separable Gaussian blur with reflect-101 borders, radius ceil(3 sigma).
/// Mirror-paired accumulation keeps the result exactly symmetric.
RealPlane gaussian_blur(const RealPlane& src, double sigma);

/// Reflect-101 border index ("dcb|abcd|cba").
int reflect101(int i, int n) noexcept;

RgbImage mirror_horizontal(const RgbImage& image);
RgbImage rotate_180(const RgbImage& image);

}  // namespace persona::image
