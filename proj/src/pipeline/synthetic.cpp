#include "persona/pipeline/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "persona/error.hpp"
#include "persona/util/rng.hpp"
#include "persona/util/text.hpp"

namespace persona::pipeline {

namespace {

double phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

image::Rgb hsv_to_rgb(double h, double s, double v) {
    h = h - std::floor(h);
    const double c = v * s;
    const double hp = h * 6.0;
    const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(hp) % 6) {
        case 0: r = c, g = x; break;
        case 1: r = x, g = c; break;
        case 2: g = c, b = x; break;
        case 3: g = x, b = c; break;
        case 4: r = x, b = c; break;
        default: r = c, b = x; break;
    }
    const double m = v - c;
    auto q = [&](double u) { return static_cast<std::uint8_t>(std::lround(std::clamp(u + m, 0.0, 1.0) * 255.0)); };
    return {q(r), q(g), q(b)};
}

}  // namespace

std::vector<Coupling> parse_signal_spec(std::string_view spec) {
    std::vector<Coupling> out;
    spec = util::trim(spec);
    if (spec.empty() || spec == "none") return out;
    for (auto part : util::split_csv(spec)) {
        part = util::trim(part);
        const auto colon = part.find(':'), eq = part.find('=');
        if (colon == std::string_view::npos || eq == std::string_view::npos || eq < colon)
            throw UsageError("signal term '" + std::string(part) + "' is not TRAIT:param=weight");
        const auto trait = parse_trait(util::trim(part.substr(0, colon)));
        if (!trait) throw UsageError("signal term '" + std::string(part) + "': unknown trait");
        const auto name = util::trim(part.substr(colon + 1, eq - colon - 1));
        const auto it = std::find(kSyntheticParams.begin(), kSyntheticParams.end(), name);
        if (it == kSyntheticParams.end()) throw UsageError("signal term '" + std::string(part) + "': unknown parameter");
        const auto w = util::parse_double(util::trim(part.substr(eq + 1)));
        if (!w || std::abs(*w) > 1) throw UsageError("signal term '" + std::string(part) + "': weight must lie in [-1, 1]");
        const auto param = static_cast<std::size_t>(it - kSyntheticParams.begin());
        for (const auto& c : out)
            if (c.param == param) throw UsageError("parameter '" + std::string(name) + "' coupled twice");
        out.push_back({*trait, param, *w});
    }
    return out;
}

int synthetic_quality(double q) noexcept { return 35 + static_cast<int>(std::lround(60.0 * std::clamp(q, 0.0, 1.0))); }

image::RgbImage render_synthetic(const SyntheticParams& p, int width, int height, std::uint64_t seed) {
    if (width < 8 || height < 8) throw UsageError("synthetic images need sides of at least 8 pixels");
    const double warmth = p[0], brightness = p[1], saturation = p[2], texture = p[3], stripes = p[4];
    util::Rng rng(seed);
    const double hue = 0.62 - 0.57 * warmth;
    const double sat = 0.15 + 0.8 * saturation;
    const double value = 0.2 + 0.7 * brightness;
    const double phase = 2.0 * 3.14159265358979323846 * util::uniform01(rng);
    const double period = 5.0 + 4.0 * util::uniform01(rng);

    image::RgbImage img(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            const double fx = static_cast<double>(x) / (width - 1) - 0.5;
            const double fy = static_cast<double>(y) / (height - 1) - 0.5;
            double v = value + 0.12 * fy;
            v += 0.25 * stripes * std::sin(2.0 * 3.14159265358979323846 * x / period + phase);
            v += 0.3 * texture * (2.0 * util::uniform01(rng) - 1.0);
            const double h = hue + 0.04 * fx;
            img(x, y) = hsv_to_rgb(h, std::clamp(sat - 0.1 * fy, 0.0, 1.0), std::clamp(v, 0.0, 1.0));
        }
    return img;
}

DatasetManifest generate_synthetic_corpus(const std::filesystem::path& dir, std::size_t n, std::uint64_t seed,
                                          const SyntheticOptions& options) {
    if (n < 8) throw UsageError("a synthetic corpus needs at least 8 subjects");
    std::filesystem::create_directories(dir / "images");
    util::Rng rng(util::derive_seed(seed, {util::hash_string("traits")}));
    std::vector<ImageRecord> records;
    records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::array<double, 5> z{};
        for (auto& v : z) v = util::normal01(rng);
        SyntheticParams params{};
        for (std::size_t k = 0; k < params.size(); ++k) {
            const double e = util::normal01(rng);
            double w = 0, zt = 0;
            for (const auto& c : options.signal)
                if (c.param == k) {
                    w = c.weight;
                    zt = z[index_of(c.trait)];
                }
            params[k] = phi(w * zt + std::sqrt(1.0 - w * w) * e);
        }
        char name[32];
        std::snprintf(name, sizeof name, "s%05zu", i + 1);
        ImageRecord r;
        r.subject_id = name;
        r.image_path = "images/" + r.subject_id + ".jpg";
        for (std::size_t t = 0; t < 5; ++t) r.traits.values[t] = std::clamp(3.0 + 0.6 * z[t], 1.0, 5.0);

        const auto img = render_synthetic(params, options.width, options.height, util::derive_seed(seed, {i, 7}));
        const auto jpeg = image::encode_jpeg(img, image::JpegOptions{synthetic_quality(params[5]), false});
        util::write_file((dir / r.image_path).string(),
                         std::string_view(reinterpret_cast<const char*>(jpeg.data()), jpeg.size()));
        records.push_back(std::move(r));
    }
    const DatasetManifest relative(std::move(records), "synthetic seed " + std::to_string(seed));
    util::write_file((dir / "manifest.csv").string(), format_manifest(relative));
    return load_manifest(dir / "manifest.csv");
}

agreement::RatingMatrix synthetic_ratings(const stats::LabelSet& truth, std::size_t raters, double flip,
                                          double middle, std::uint64_t seed) {
    if (raters == 0) throw UsageError("need at least one rater");
    if (!(flip >= 0 && flip <= 1) || !(middle >= 0 && middle <= 1)) throw UsageError("probabilities must lie in [0, 1]");
    std::vector<std::string> ids;
    for (std::size_t r = 0; r < raters; ++r) {
        char name[32];
        std::snprintf(name, sizeof name, "r%02zu", r + 1);
        ids.push_back(name);
    }
    agreement::RatingMatrix m(ids, truth.ids);
    m.trait = truth.trait;
    for (std::size_t r = 0; r < raters; ++r) {
        util::Rng rng(util::derive_seed(seed, {util::hash_string(ids[r])}));
        for (std::size_t i = 0; i < truth.size(); ++i) {
            int label = truth.labels[i];
            if (util::uniform01(rng) < flip) label = 1 - label;
            const bool strong = util::uniform01(rng) < 0.5;
            int score = label == 1 ? (strong ? 5 : 4) : (strong ? 1 : 2);
            if (util::uniform01(rng) < middle) score = 3;
            m.at(r, i) = score;
        }
    }
    return m;
}

}  // namespace persona::pipeline
