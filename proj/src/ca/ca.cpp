#include "persona/ca/ca.hpp"

#include <algorithm>
#include <cmath>

#include "persona/ca/texture.hpp"
#include "persona/ca/wavelet.hpp"

namespace persona::ca {

ThirdsWindow central_third(int width, int height) noexcept {
    ThirdsWindow r{width / 3, (2 * width + 2) / 3, height / 3, (2 * height + 2) / 3};
    r.x1 = std::max(r.x1, r.x0 + 1);
    r.y1 = std::max(r.y1, r.y0 + 1);
    return r;
}

std::array<double, kCompositionFeatures> composition_features(const HsvImage& hsv, const image::RgbImage& rgb,
                                                              const MeanShiftOptions& segmentation,
                                                              const CannyOptions& edges) {
    const int w = rgb.width(), h = rgb.height();
    if (std::min(w, h) < kMinSide) throw TooSmallError("image must be at least 8x8 pixels");
    std::array<double, kCompositionFeatures> f{};
    f[0] = edge_fraction(image::to_gray(rgb), edges);

    const auto seg = mean_shift_segment(rgb, segmentation);
    f[1] = static_cast<double>(seg.region_count());
    f[2] = seg.mean_region_size();

    f[3] = low_depth_of_field(hsv.hue_unit());
    f[4] = low_depth_of_field(hsv.saturation);
    f[5] = low_depth_of_field(hsv.value);

    const auto win = central_third(w, h);
    double s = 0, v = 0;
    for (int y = win.y0; y < win.y1; ++y)
        for (int x = win.x0; x < win.x1; ++x) {
            s += hsv.saturation(x, y);
            v += hsv.value(x, y);
        }
    const double area = static_cast<double>(win.x1 - win.x0) * (win.y1 - win.y0);
    f[6] = s / area;
    f[7] = v / area;
    f[8] = static_cast<double>(w + h);
    return f;
}

std::array<double, kTextureFeatures> texture_features(const HsvImage& hsv, const image::GrayImage& gray) {
    if (std::min(gray.width(), gray.height()) < kMinSide) throw TooSmallError("image must be at least 8x8 pixels");
    std::array<double, kTextureFeatures> f{};
    std::size_t k = 0;
    f[k++] = gray_entropy(gray);

    const std::array<image::RealPlane, 3> channels{hsv.hue_unit(), hsv.saturation, hsv.value};
    std::array<double, 3> sums{};
    for (std::size_t c = 0; c < 3; ++c) {
        const auto dec = haar_decompose(center_crop_to_multiple(channels[c], 8), 3);
        for (int l = 0; l < 3; ++l) {
            const double m = mean_abs_detail(dec.levels[l]);
            f[k++] = m;
            sums[c] += m;
        }
    }
    for (double s : sums) f[k++] = s;

    const auto t = tamura(image::to_real(gray));
    f[k++] = t.coarseness;
    f[k++] = t.contrast;
    f[k++] = t.directionality;

    for (const auto& ch : channels) {
        const auto st = glcm_stats(glcm(quantize_unit(ch, kGlcmLevels), kGlcmLevels, 1, 0), kGlcmLevels);
        f[k++] = st.contrast;
        f[k++] = st.correlation;
        f[k++] = st.energy;
        f[k++] = st.homogeneity;
    }

    for (double g : gist(image::to_real(gray, 1.0 / 255.0))) f[k++] = g;
    if (k != kTextureFeatures) throw InvariantError("texture block size mismatch");
    return f;
}

std::vector<std::string> ca_feature_names() {
    std::vector<std::string> n{"mean_s", "std_s", "std_v", "hue_circular_variance", "use_of_light",
                               "valence", "arousal", "dominance", "color_diversity_emd"};
    for (const auto& e : ColorNameTable::defaults().entries()) n.push_back("color_" + e.name);
    for (auto s : {"edge_fraction", "region_count", "mean_region_size", "low_dof_h", "low_dof_s", "low_dof_v",
                   "thirds_mean_s", "thirds_mean_v", "image_size"})
        n.emplace_back(s);
    n.emplace_back("gray_entropy");
    for (auto c : {"h", "s", "v"})
        for (int l = 1; l <= 3; ++l) n.push_back(std::string("wavelet_") + c + "_l" + std::to_string(l));
    for (auto c : {"h", "s", "v"}) n.push_back(std::string("wavelet_") + c + "_sum");
    for (auto s : {"tamura_coarseness", "tamura_contrast", "tamura_directionality"}) n.emplace_back(s);
    for (auto c : {"h", "s", "v"})
        for (auto p : {"contrast", "correlation", "energy", "homogeneity"})
            n.push_back(std::string("glcm_") + c + "_" + p);
    for (int s = 0; s < kGistScales; ++s)
        for (int o = 0; o < kGistOrientations; ++o)
            n.push_back("gist_s" + std::to_string(s) + "_o" + std::to_string(o));
    n.emplace_back("face_count");
    return n;
}

CaExtractor::CaExtractor(const std::filesystem::path& cascade_path, ColorNameTable color_names)
    : faces_(cascade_path), names_(std::move(color_names)) {}

std::vector<double> CaExtractor::extract(const image::RgbImage& rgb) {
    if (std::min(rgb.width(), rgb.height()) < kMinSide) throw TooSmallError("image must be at least 8x8 pixels");
    const auto hsv = rgb_to_hsv(rgb);
    const auto gray = image::to_gray(rgb);

    std::vector<double> f;
    f.reserve(82);
    const auto color = color_features(hsv, rgb, names_);
    const auto comp = composition_features(hsv, rgb);
    const auto tex = texture_features(hsv, gray);
    f.insert(f.end(), color.begin(), color.end());
    f.insert(f.end(), comp.begin(), comp.end());
    f.insert(f.end(), tex.begin(), tex.end());
    f.push_back(static_cast<double>(faces_.count_faces(gray)));
    if (f.size() != 82) throw InvariantError("CA vector has " + std::to_string(f.size()) + " entries");
    for (double v : f)
        if (!std::isfinite(v)) throw InvariantError("CA feature is not finite");
    return f;
}

std::vector<double> CaExtractor::extract(std::span<const std::uint8_t> jpeg_bytes) {
    return extract(image::decode_image(jpeg_bytes));
}

}  // namespace persona::ca
