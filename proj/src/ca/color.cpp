#include "persona/ca/color.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "persona/ca/emd.hpp"
#include "persona/util/text.hpp"

namespace persona::ca {
namespace {

constexpr std::array<std::string_view, kColorNames> kNames{"black",  "blue",   "brown", "green",
                                                           "gray",   "orange", "pink",  "purple",
                                                           "red",    "white",  "yellow"};

const std::array<double, 256>& linear_lut() {
    static const auto lut = [] {
        std::array<double, 256> t{};
        for (int i = 0; i < 256; ++i) {
            const double c = i / 255.0;
            t[i] = c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
        }
        return t;
    }();
    return lut;
}

double lab_f(double t) {
    constexpr double delta = 6.0 / 29.0;
    return t > delta * delta * delta ? std::cbrt(t) : t / (3 * delta * delta) + 4.0 / 29.0;
}

double squared_distance(const Lab& x, const Lab& y) {
    const double dl = x.l - y.l, da = x.a - y.a, db = x.b - y.b;
    return dl * dl + da * da + db * db;
}

}  // namespace

Lab srgb_to_lab(image::Rgb p) noexcept {
    const auto& lut = linear_lut();
    const double r = lut[p.r], g = lut[p.g], b = lut[p.b];
    const double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
    const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
    const double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;
    const double fx = lab_f(x / 0.95047), fy = lab_f(y / 1.0), fz = lab_f(z / 1.08883);
    return Lab{116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

ColorNameTable ColorNameTable::defaults() {
    // sRGB prototypes; black and white are the scale ends, the rest are the
    // CSS named colors of the same terms.
    static constexpr std::array<image::Rgb, kColorNames> kPrototypes{{{0, 0, 0},
                                                                     {0, 0, 255},
                                                                     {139, 69, 19},
                                                                     {0, 128, 0},
                                                                     {128, 128, 128},
                                                                     {255, 165, 0},
                                                                     {255, 192, 203},
                                                                     {128, 0, 128},
                                                                     {255, 0, 0},
                                                                     {255, 255, 255},
                                                                     {255, 255, 0}}};
    ColorNameTable t;
    for (std::size_t k = 0; k < kColorNames; ++k) t.entries_[k] = Entry{std::string(kNames[k]), srgb_to_lab(kPrototypes[k])};
    return t;
}

ColorNameTable ColorNameTable::parse(std::string_view text) {
    ColorNameTable t;
    std::array<bool, kColorNames> seen{};
    std::size_t lineno = 0;
    for (auto line : util::split_lines(text)) {
        ++lineno;
        line = util::trim(line);
        if (line.empty() || line.front() == '#' || line.starts_with("name,")) continue;
        const auto f = util::split_csv(line);
        if (f.size() != 4) throw DataError("color table line " + std::to_string(lineno) + ": expected name,L,a,b");
        const auto name = util::trim(f[0]);
        std::size_t k = 0;
        while (k < kColorNames && kNames[k] != name) ++k;
        if (k == kColorNames)
            throw DataError("color table line " + std::to_string(lineno) + ": unknown color name '" +
                            std::string(name) + "'");
        const auto l = util::parse_double(f[1]), a = util::parse_double(f[2]), b = util::parse_double(f[3]);
        if (!l || !a || !b) throw DataError("color table line " + std::to_string(lineno) + ": bad coordinate");
        t.entries_[k] = Entry{std::string(name), Lab{*l, *a, *b}};
        seen[k] = true;
    }
    for (std::size_t k = 0; k < kColorNames; ++k)
        if (!seen[k]) throw DataError("color table is missing '" + std::string(kNames[k]) + "'");
    return t;
}

ColorNameTable ColorNameTable::load(const std::filesystem::path& path) { return parse(util::read_file(path.string())); }

std::size_t ColorNameTable::nearest(const Lab& lab) const noexcept {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < kColorNames; ++k) {
        const double d = squared_distance(lab, entries_[k].lab);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    return best;
}

Emotion emotion_from_means(double mean_v, double mean_s) noexcept {
    return Emotion{0.69 * mean_v + 0.22 * mean_s, -0.31 * mean_v + 0.60 * mean_s, -0.76 * mean_v + 0.32 * mean_s};
}

std::array<double, 64> rgb_histogram_64(const image::RgbImage& rgb) {
    std::array<double, 64> h{};
    for (const auto p : rgb.pixels()) h[(p.r >> 6) * 16 + (p.g >> 6) * 4 + (p.b >> 6)] += 1.0;
    const double n = static_cast<double>(rgb.size());
    for (auto& v : h) v /= n;
    return h;
}

double color_diversity(const std::array<double, 64>& histogram) {
    static const auto cost = [] {
        std::vector<double> c(64 * 64);
        for (int i = 0; i < 64; ++i)
            for (int j = 0; j < 64; ++j) {
                const int dr = i / 16 - j / 16, dg = (i / 4) % 4 - (j / 4) % 4, db = i % 4 - j % 4;
                c[i * 64 + j] = std::sqrt(static_cast<double>(dr * dr + dg * dg + db * db));
            }
        return c;
    }();
    std::array<double, 64> uniform;
    uniform.fill(1.0 / 64.0);
    return earth_movers_distance(histogram, uniform, cost);
}

std::array<double, kColorFeatures> color_features(const HsvImage& hsv, const image::RgbImage& rgb,
                                                  const ColorNameTable& names) {
    if (rgb.empty() || hsv.hue.empty()) throw DataError("color features need a non-empty image");
    const double n = static_cast<double>(rgb.size());

    double sum_s = 0, sum_v = 0, sum_cos = 0, sum_sin = 0;
    for (std::size_t i = 0; i < hsv.hue.size(); ++i) {
        sum_s += hsv.saturation.pixels()[i];
        sum_v += hsv.value.pixels()[i];
        sum_cos += std::cos(hsv.hue.pixels()[i]);
        sum_sin += std::sin(hsv.hue.pixels()[i]);
    }
    const double mean_s = sum_s / n, mean_v = sum_v / n;
    double var_s = 0, var_v = 0;
    for (std::size_t i = 0; i < hsv.hue.size(); ++i) {
        var_s += (hsv.saturation.pixels()[i] - mean_s) * (hsv.saturation.pixels()[i] - mean_s);
        var_v += (hsv.value.pixels()[i] - mean_v) * (hsv.value.pixels()[i] - mean_v);
    }
    const double resultant = std::hypot(sum_cos, sum_sin) / n;
    const double circ_var = std::clamp(1.0 - resultant, 0.0, 1.0);
    const auto emotion = emotion_from_means(mean_v, mean_s);

    std::array<double, kColorNames> name_counts{};
    for (const auto p : rgb.pixels()) name_counts[names.nearest(srgb_to_lab(p))] += 1.0;

    std::array<double, kColorFeatures> f{};
    f[0] = mean_s;
    f[1] = std::sqrt(var_s / n);
    f[2] = std::sqrt(var_v / n);
    f[3] = circ_var;
    f[4] = mean_v;
    f[5] = emotion.valence;
    f[6] = emotion.arousal;
    f[7] = emotion.dominance;
    f[8] = color_diversity(rgb_histogram_64(rgb));
    for (std::size_t k = 0; k < kColorNames; ++k) f[9 + k] = name_counts[k] / n;
    return f;
}

}  // namespace persona::ca
