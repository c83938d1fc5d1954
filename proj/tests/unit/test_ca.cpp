#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "persona/ca/ca.hpp"
#include "persona/ca/color.hpp"
#include "persona/ca/edges.hpp"
#include "persona/ca/emd.hpp"
#include "persona/ca/faces.hpp"
#include "persona/ca/hsv.hpp"
#include "persona/ca/segmentation.hpp"
#include "persona/ca/texture.hpp"
#include "persona/ca/wavelet.hpp"
#include "support.hpp"

using namespace persona;
using namespace persona::ca;
using image::GrayImage;
using image::RgbImage;

namespace {

RgbImage constant_rgb(int w, int h, image::Rgb c) { return RgbImage(w, h, c); }

}  // namespace

TEST(Hsv, KnownColors) {
    const auto red = rgb_to_hsv(image::Rgb{255, 0, 0});
    EXPECT_DOUBLE_EQ(red.h, 0.0);
    EXPECT_DOUBLE_EQ(red.s, 1.0);
    EXPECT_DOUBLE_EQ(red.v, 1.0);

    const auto gray = rgb_to_hsv(image::Rgb{128, 128, 128});
    EXPECT_DOUBLE_EQ(gray.s, 0.0);
    EXPECT_DOUBLE_EQ(gray.h, 0.0);
    EXPECT_NEAR(gray.v, 128.0 / 255.0, 1e-15);

    const auto green = rgb_to_hsv(image::Rgb{0, 255, 0});
    EXPECT_NEAR(green.h, kTwoPi / 3.0, 1e-12);
    const auto blue = rgb_to_hsv(image::Rgb{0, 0, 255});
    EXPECT_NEAR(blue.h, 2.0 * kTwoPi / 3.0, 1e-12);
}

TEST(Hsv, HueStaysInRange) {
    const auto img = testkit::random_rgb(40, 40, 3);
    const auto hsv = rgb_to_hsv(img);
    for (double h : hsv.hue.pixels()) {
        EXPECT_GE(h, 0.0);
        EXPECT_LT(h, kTwoPi);
    }
    for (double h : hsv.hue_unit().pixels()) {
        EXPECT_GE(h, 0.0);
        EXPECT_LT(h, 1.0);
    }
}

TEST(Color, ConstantImage) {
    const auto img = constant_rgb(16, 16, {200, 100, 50});
    const auto hsv = rgb_to_hsv(img);
    const auto f = color_features(hsv, img, ColorNameTable::defaults());
    const auto p = rgb_to_hsv(image::Rgb{200, 100, 50});
    EXPECT_NEAR(f[0], p.s, 1e-12);
    EXPECT_NEAR(f[1], 0.0, 1e-12);
    EXPECT_NEAR(f[2], 0.0, 1e-12);
    EXPECT_NEAR(f[3], 0.0, 1e-12);
    EXPECT_NEAR(f[4], p.v, 1e-12);
    const auto e = emotion_from_means(p.v, p.s);
    EXPECT_NEAR(f[5], e.valence, 1e-12);
    EXPECT_NEAR(f[6], e.arousal, 1e-12);
    EXPECT_NEAR(f[7], e.dominance, 1e-12);
    int ones = 0;
    for (std::size_t k = 9; k < kColorFeatures; ++k) ones += f[k] == 1.0;
    EXPECT_EQ(ones, 1);
}

TEST(Color, OppositeHuesHaveCircularVarianceOne) {
    RgbImage img(8, 8);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) img(x, y) = (x + y) % 2 ? image::Rgb{255, 0, 0} : image::Rgb{0, 255, 255};
    const auto f = color_features(rgb_to_hsv(img), img, ColorNameTable::defaults());
    EXPECT_NEAR(f[3], 1.0, 1e-12);
}

TEST(Color, NameFractionsSumToOne) {
    for (std::uint64_t s = 1; s <= 5; ++s) {
        const auto img = testkit::random_rgb(20, 12, s);
        const auto f = color_features(rgb_to_hsv(img), img, ColorNameTable::defaults());
        double sum = 0;
        for (std::size_t k = 9; k < kColorFeatures; ++k) {
            EXPECT_GE(f[k], 0.0);
            sum += f[k];
        }
        EXPECT_NEAR(sum, 1.0, 1e-12);
    }
}

TEST(Color, PrototypeTableLoadsFromData) {
    const auto t = ColorNameTable::load(std::filesystem::path(PERSONA_DATA_DIR) / "color_prototypes.csv");
    const auto d = ColorNameTable::defaults();
    for (std::size_t k = 0; k < kColorNames; ++k) {
        EXPECT_EQ(t.entries()[k].name, d.entries()[k].name);
        EXPECT_NEAR(t.entries()[k].lab.l, d.entries()[k].lab.l, 1e-9);
    }
    EXPECT_THROW(ColorNameTable::parse("name,L,a,b\nblack,0,0,0\n"), DataError);
}

TEST(Color, UniformHistogramHasZeroDiversity) {
    RgbImage img(8, 8);
    for (int i = 0; i < 64; ++i)
        img(i % 8, i / 8) = {static_cast<std::uint8_t>((i / 16) * 64 + 32), static_cast<std::uint8_t>(((i / 4) % 4) * 64 + 32),
                             static_cast<std::uint8_t>((i % 4) * 64 + 32)};
    const auto h = rgb_histogram_64(img);
    for (double v : h) EXPECT_DOUBLE_EQ(v, 1.0 / 64.0);
    EXPECT_NEAR(color_diversity(h), 0.0, 1e-12);

    const auto single = rgb_histogram_64(constant_rgb(8, 8, {0, 0, 0}));
    EXPECT_GT(color_diversity(single), 0.0);
}

TEST(Emd, MatchesCdfDistanceOnALine) {
    util::Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + util::uniform_index(rng, 10);
        std::vector<double> a(n), b(n), cost(n * n);
        for (auto& v : a) v = util::uniform01(rng);
        for (auto& v : b) v = util::uniform01(rng);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) cost[i * n + j] = std::abs(static_cast<double>(i) - static_cast<double>(j));
        const double sa = std::accumulate(a.begin(), a.end(), 0.0), sb = std::accumulate(b.begin(), b.end(), 0.0);
        double ca = 0, cb = 0, oracle = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            ca += a[i] / sa;
            cb += b[i] / sb;
            oracle += std::abs(ca - cb);
        }
        EXPECT_NEAR(earth_movers_distance(a, b, cost), oracle, 1e-9);
    }
}

TEST(Emd, IdenticalDistributionsCostNothing) {
    const std::vector<double> a{0.2, 0.3, 0.5};
    const std::vector<double> cost{0, 1, 2, 1, 0, 1, 2, 1, 0};
    EXPECT_NEAR(earth_movers_distance(a, a, cost), 0.0, 1e-12);
}

TEST(Composition, ConstantImage) {
    const auto img = constant_rgb(32, 24, {90, 140, 60});
    const auto f = composition_features(rgb_to_hsv(img), img);
    EXPECT_DOUBLE_EQ(f[0], 0.0);
    EXPECT_DOUBLE_EQ(f[1], 1.0);
    EXPECT_DOUBLE_EQ(f[2], 32.0 * 24.0);
    EXPECT_DOUBLE_EQ(f[3], 0.0);
    EXPECT_DOUBLE_EQ(f[8], 56.0);
}

TEST(Composition, RuleOfThirdsOnSaturatedCentre) {
    RgbImage img(30, 30, image::Rgb{128, 128, 128});
    const auto win = central_third(30, 30);
    EXPECT_EQ(win.x0, 10);
    EXPECT_EQ(win.x1, 20);
    for (int y = win.y0; y < win.y1; ++y)
        for (int x = win.x0; x < win.x1; ++x) img(x, y) = {255, 0, 0};
    const auto f = composition_features(rgb_to_hsv(img), img);
    EXPECT_DOUBLE_EQ(f[6], 1.0);
    EXPECT_DOUBLE_EQ(f[7], 1.0);
}

TEST(Composition, TooSmallImage) {
    const auto img = constant_rgb(7, 20, {1, 2, 3});
    EXPECT_THROW(composition_features(rgb_to_hsv(img), img), TooSmallError);
}

TEST(LowDof, DetailOnlyInCentre) {
    util::Rng rng(5);
    image::RealPlane p(64, 64, 0.5);
    for (int y = 16; y < 48; ++y)
        for (int x = 16; x < 48; ++x) p(x, y) = util::uniform01(rng);
    EXPECT_NEAR(low_depth_of_field(p), 1.0, 1e-12);

    image::RealPlane q(64, 64, 0.5);
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 16; ++x) q(x, y) = util::uniform01(rng);
    EXPECT_NEAR(low_depth_of_field(q), 0.0, 1e-12);
    EXPECT_DOUBLE_EQ(low_depth_of_field(image::RealPlane(64, 64, 0.3)), 0.0);
}

TEST(Wavelet, HaarPreservesEnergy) {
    util::Rng rng(9);
    image::RealPlane p(16, 8);
    double energy = 0;
    for (auto& v : p.pixels()) {
        v = util::normal01(rng);
        energy += v * v;
    }
    const auto d = haar_decompose(p, 3);
    ASSERT_EQ(d.levels.size(), 3u);
    double e = 0;
    for (double v : d.approximation.pixels()) e += v * v;
    for (const auto& l : d.levels)
        for (const auto* band : {&l.lh, &l.hl, &l.hh})
            for (double v : band->pixels()) e += v * v;
    EXPECT_NEAR(e, energy, 1e-9);
    EXPECT_THROW(haar_decompose(image::RealPlane(12, 8), 3), DataError);
}

TEST(Texture, ConstantImage) {
    const auto img = constant_rgb(32, 32, {70, 70, 70});
    const auto gray = image::to_gray(img);
    EXPECT_DOUBLE_EQ(gray_entropy(gray), 0.0);
    const auto q = quantize_unit(image::to_real(gray, 1.0 / 255.0), kGlcmLevels);
    const auto st = glcm_stats(glcm(q, kGlcmLevels, 1, 0), kGlcmLevels);
    EXPECT_DOUBLE_EQ(st.energy, 1.0);
    EXPECT_DOUBLE_EQ(st.contrast, 0.0);
    EXPECT_DOUBLE_EQ(st.homogeneity, 1.0);
    EXPECT_DOUBLE_EQ(st.correlation, 1.0);

    const auto f = texture_features(rgb_to_hsv(img), gray);
    for (double v : f) EXPECT_TRUE(std::isfinite(v));
    EXPECT_DOUBLE_EQ(f[0], 0.0);
    for (int k = 1; k <= 12; ++k) EXPECT_NEAR(f[k], 0.0, 1e-12);
}

TEST(Texture, TwoLevelEntropyIsOneBit) {
    GrayImage g(10, 10);
    for (int i = 0; i < 100; ++i) g.pixels()[i] = i % 2 ? 30 : 220;
    EXPECT_DOUBLE_EQ(gray_entropy(g), 1.0);
    GrayImage four(8, 8);
    for (int i = 0; i < 64; ++i) four.pixels()[i] = static_cast<std::uint8_t>(i % 4);
    EXPECT_DOUBLE_EQ(gray_entropy(four), 2.0);
}

TEST(Texture, CheckerboardGlcm) {
    image::Plane<int> q(6, 6);
    for (int y = 0; y < 6; ++y)
        for (int x = 0; x < 6; ++x) q(x, y) = (x + y) % 2 ? 3 : 0;
    const auto p = glcm(q, 4, 1, 0);
    EXPECT_DOUBLE_EQ(p[0 * 4 + 3], 0.5);
    EXPECT_DOUBLE_EQ(p[3 * 4 + 0], 0.5);
    const auto st = glcm_stats(p, 4);
    EXPECT_DOUBLE_EQ(st.contrast, 9.0);
    EXPECT_DOUBLE_EQ(st.energy, 0.5);
    EXPECT_DOUBLE_EQ(st.homogeneity, 0.1);
    EXPECT_NEAR(st.correlation, -1.0, 1e-12);
}

TEST(Texture, GlcmMatchesPairEnumeration) {
    for (std::uint64_t s = 1; s <= 20; ++s) {
        const auto g = testkit::random_gray(13, 9, s, 5);
        image::Plane<int> q(13, 9);
        for (std::size_t i = 0; i < g.size(); ++i) q.pixels()[i] = g.pixels()[i];
        for (auto [dx, dy] : {std::pair{1, 0}, std::pair{0, 1}, std::pair{1, 1}, std::pair{-1, 2}}) {
            std::vector<double> oracle(25, 0.0);
            std::vector<std::pair<int, int>> pairs;
            for (int y = 0; y < 9; ++y)
                for (int x = 0; x < 13; ++x) {
                    const int x2 = x + dx, y2 = y + dy;
                    if (x2 >= 0 && x2 < 13 && y2 >= 0 && y2 < 9) {
                        pairs.emplace_back(q(x, y), q(x2, y2));
                        pairs.emplace_back(q(x2, y2), q(x, y));
                    }
                }
            for (auto [i, j] : pairs) oracle[i * 5 + j] += 1.0 / static_cast<double>(pairs.size());
            const auto p = glcm(q, 5, dx, dy);
            for (int k = 0; k < 25; ++k) EXPECT_NEAR(p[k], oracle[k], 1e-14);

            double contrast = 0, energy = 0, homog = 0;
            for (auto [i, j] : pairs) {
                contrast += (i - j) * (i - j);
                homog += 1.0 / (1.0 + (i - j) * (i - j));
            }
            for (double v : oracle) energy += v * v;
            const auto st = glcm_stats(p, 5);
            EXPECT_NEAR(st.contrast, contrast / pairs.size(), 1e-12);
            EXPECT_NEAR(st.homogeneity, homog / pairs.size(), 1e-12);
            EXPECT_NEAR(st.energy, energy, 1e-12);
            EXPECT_GE(st.correlation, -1.0 - 1e-12);
            EXPECT_LE(st.correlation, 1.0 + 1e-12);
        }
    }
}

TEST(Texture, QuantizeClampsToRange) {
    image::RealPlane p(3, 1);
    p(0, 0) = 0.0;
    p(1, 0) = 0.99999;
    p(2, 0) = 1.0;
    const auto q = quantize_unit(p, 16);
    EXPECT_EQ(q(0, 0), 0);
    EXPECT_EQ(q(1, 0), 15);
    EXPECT_EQ(q(2, 0), 15);
}

TEST(Texture, MirrorInvariants) {
    for (std::uint64_t s = 1; s <= 5; ++s) {
        const auto img = testkit::blob_rgb(64, 48, s);
        const auto mir = image::mirror_horizontal(img);
        const auto a = texture_features(rgb_to_hsv(img), image::to_gray(img));
        const auto b = texture_features(rgb_to_hsv(mir), image::to_gray(mir));
        EXPECT_DOUBLE_EQ(a[0], b[0]);
        for (int k = 1; k <= 12; ++k) EXPECT_NEAR(a[k], b[k], 1e-12) << k;
        EXPECT_NEAR(a[14], b[14], 1e-12);
    }
}

TEST(Edges, ConstantImageHasNoEdges) {
    EXPECT_DOUBLE_EQ(edge_fraction(GrayImage(20, 20, 128)), 0.0);
    EXPECT_EQ(otsu_threshold(GrayImage(5, 5, 9)), 0);
}

TEST(Edges, StepEdgeIsFound) {
    GrayImage g(32, 32, 20);
    for (int y = 0; y < 32; ++y)
        for (int x = 16; x < 32; ++x) g(x, y) = 220;
    const auto e = canny(g);
    int column_hits = 0;
    for (int y = 4; y < 28; ++y) column_hits += e(15, y) || e(16, y);
    EXPECT_EQ(column_hits, 24);
    EXPECT_GT(edge_fraction(g), 0.0);
    EXPECT_LT(edge_fraction(g), 0.2);
}

TEST(Edges, CommuteWithHalfTurn) {
    for (std::uint64_t s = 1; s <= 5; ++s) {
        const auto img = testkit::blob_rgb(40, 30, s);
        EXPECT_DOUBLE_EQ(edge_fraction(image::to_gray(img)), edge_fraction(image::to_gray(image::rotate_180(img))));
    }
}

TEST(Segmentation, PartitionsTheImage) {
    for (std::uint64_t s = 1; s <= 4; ++s) {
        const auto img = testkit::blob_rgb(32, 32, s);
        const auto seg = mean_shift_segment(img);
        ASSERT_GE(seg.region_count(), 1u);
        EXPECT_EQ(std::accumulate(seg.region_sizes.begin(), seg.region_sizes.end(), std::size_t{0}), 32u * 32u);
        std::vector<std::size_t> counted(seg.region_count(), 0);
        for (int v : seg.labels.pixels()) {
            ASSERT_GE(v, 0);
            ASSERT_LT(static_cast<std::size_t>(v), seg.region_count());
            ++counted[v];
        }
        EXPECT_EQ(counted, seg.region_sizes);
        for (auto n : seg.region_sizes) EXPECT_GE(n, 20u);
        EXPECT_DOUBLE_EQ(seg.mean_region_size(), 1024.0 / static_cast<double>(seg.region_count()));
    }
}

TEST(Segmentation, TwoFlatHalvesGiveTwoRegions) {
    RgbImage img(32, 32, image::Rgb{20, 20, 200});
    for (int y = 0; y < 32; ++y)
        for (int x = 16; x < 32; ++x) img(x, y) = {230, 200, 20};
    EXPECT_EQ(mean_shift_segment(img).region_count(), 2u);
}

TEST(Faces, BlankImageHasNoFaces) {
    FaceDetector d(default_cascade_path());
    EXPECT_EQ(d.count_faces(GrayImage(96, 96, 128)), 0u);
    const auto noise = testkit::random_gray(96, 96, 4);
    EXPECT_EQ(d.count_faces(noise), d.count_faces(noise));
    EXPECT_THROW(FaceDetector("/nonexistent/cascade.xml"), DataError);
}

TEST(CaExtractor, VectorHas82FiniteEntries) {
    CaExtractor ex(default_cascade_path(), ColorNameTable::defaults());
    const auto names = ca_feature_names();
    EXPECT_EQ(names.size(), 82u);
    const std::set<std::string> unique(names.begin(), names.end());
    EXPECT_EQ(unique.size(), 82u);
    const auto img = testkit::blob_rgb(64, 64, 2);
    const auto f = ex.extract(img);
    ASSERT_EQ(f.size(), 82u);
    for (double v : f) EXPECT_TRUE(std::isfinite(v));
    EXPECT_EQ(ex.extract(img), f);
    EXPECT_THROW(ex.extract(constant_rgb(6, 30, {})), TooSmallError);
    const auto bytes = image::encode_jpeg(img);
    EXPECT_EQ(ex.extract(bytes).size(), 82u);
}
