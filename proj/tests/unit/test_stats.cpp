#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "oracles.hpp"
#include "persona/stats/binarize.hpp"
#include "persona/stats/correlation.hpp"
#include "persona/stats/selection.hpp"
#include "support.hpp"

using namespace persona;
using namespace persona::stats;

namespace {

std::vector<std::string> make_ids(std::size_t n) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back("s" + std::to_string(i));
    return ids;
}

/// CA-shaped matrix whose first `planted` columns track the scores.
FeatureMatrix planted_matrix(const std::vector<std::string>& ids, const std::vector<double>& scores, std::size_t planted,
                             double noise, std::uint64_t seed) {
    util::Rng rng(seed);
    FeatureMatrix m(FeatureFamily::CA);
    std::vector<double> row(kCaDim);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = 0; j < kCaDim; ++j)
            row[j] = j < planted ? scores[i] + noise * util::normal01(rng) : util::normal01(rng);
        m.add_row(ids[i], row);
    }
    return m;
}

std::vector<double> normal_scores(std::size_t n, std::uint64_t seed) {
    util::Rng rng(seed);
    std::vector<double> s(n);
    for (auto& v : s) v = util::normal01(rng);
    return s;
}

}  // namespace

TEST(Spearman, IdentityAndReversal) {
    std::vector<double> x{3, 1, 4, 1, 5, 9, 2, 6};
    std::vector<double> rev(x);
    for (auto& v : rev) v = -v;
    const auto a = spearman(x, x);
    ASSERT_TRUE(a.defined);
    EXPECT_DOUBLE_EQ(a.rho, 1.0);
    EXPECT_EQ(a.p_value, 0.0);
    EXPECT_DOUBLE_EQ(spearman(x, rev).rho, -1.0);
}

TEST(Spearman, ConstantInputIsUndefined) {
    const std::vector<double> x{1, 2, 3, 4}, c{2, 2, 2, 2};
    const auto r = spearman(x, c);
    EXPECT_FALSE(r.defined);
    EXPECT_EQ(r.p_value, 1.0);
    EXPECT_THROW(spearman(std::vector<double>{1, 2}, std::vector<double>{1, 2}), DataError);
    EXPECT_THROW(spearman(x, std::vector<double>{1, 2, 3}), DataError);
}

TEST(Spearman, MidranksOfTies) {
    EXPECT_EQ(midranks(std::vector<double>{10, 20, 20, 5}), (std::vector<double>{2, 3.5, 3.5, 1}));
}

TEST(Spearman, MatchesNaiveOracleOnRandomPairs) {
    util::Rng rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 3 + util::uniform_index(rng, 60);
        const bool ties = trial % 3 == 0;
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = ties ? static_cast<double>(util::uniform_index(rng, 5)) : util::normal01(rng);
            y[i] = ties ? static_cast<double>(util::uniform_index(rng, 5)) + 0.3 * x[i] : x[i] + util::normal01(rng);
        }
        const auto r = spearman(x, y);
        const double want = testkit::naive_spearman(x, y);
        if (std::isnan(want)) {
            EXPECT_FALSE(r.defined);
            continue;
        }
        ASSERT_TRUE(r.defined);
        EXPECT_NEAR(r.rho, want, 1e-12);
        if (trial % 10 == 0) {
            EXPECT_NEAR(r.p_value, testkit::naive_correlation_p(want, n), 1e-8);
        }
    }
}

TEST(Spearman, InvariantUnderMonotoneTransforms) {
    util::Rng rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(30), y(30);
        for (std::size_t i = 0; i < 30; ++i) {
            x[i] = util::normal01(rng);
            y[i] = x[i] + util::normal01(rng);
        }
        const double base = spearman(x, y).rho;
        auto ex = x, cube = y;
        for (auto& v : ex) v = std::exp(v);
        for (auto& v : cube) v = v * v * v;
        EXPECT_NEAR(spearman(ex, cube).rho, base, 1e-12);
        EXPECT_NEAR(spearman(y, x).rho, base, 1e-12);
    }
}

TEST(Correlation, PValueOracle) {
    for (double r : {0.0, 0.1, 0.3, -0.5, 0.9, 0.999})
        for (std::size_t n : {5u, 20u, 100u})
            EXPECT_NEAR(correlation_p_value(r, n), testkit::naive_correlation_p(r, n), 1e-9) << r << " " << n;
    EXPECT_DOUBLE_EQ(correlation_p_value(0.0, 10), 1.0);
}

TEST(Bonferroni, Cases) {
    EXPECT_DOUBLE_EQ(bonferroni(0.01, 1), 0.01);
    EXPECT_DOUBLE_EQ(bonferroni(0.01, 82), 0.82);
    EXPECT_DOUBLE_EQ(bonferroni(0.02, 82), 1.0);
    EXPECT_DOUBLE_EQ(bonferroni(0.0, 4096), 0.0);
    EXPECT_THROW(bonferroni(0.1, 0), UsageError);
    util::Rng rng(1);
    for (int i = 0; i < 200; ++i) {
        const double a = util::uniform01(rng), b = util::uniform01(rng);
        const std::size_t m = 1 + util::uniform_index(rng, 1000);
        EXPECT_GE(bonferroni(a, m), a);
        if (a <= b) {
            EXPECT_LE(bonferroni(a, m), bonferroni(b, m));
        }
        EXPECT_LE(bonferroni(a, m), bonferroni(a, m + 1));
    }
}

TEST(TTest, GreaterAlternative) {
    const std::vector<double> x{0.6, 0.7, 0.65, 0.72, 0.58};
    const auto t = one_sample_t_greater(x, 0.5);
    double mean = 0, var = 0;
    for (double v : x) mean += v / 5;
    for (double v : x) var += (v - mean) * (v - mean) / 4;
    const double stat = (mean - 0.5) / std::sqrt(var / 5);
    EXPECT_NEAR(t.statistic, stat, 1e-12);
    EXPECT_NEAR(t.p_value, testkit::t_upper_tail(stat, 4), 1e-9);
    EXPECT_EQ(one_sample_t_greater(std::vector<double>{0.6, 0.6}, 0.5).p_value, 0.0);
    EXPECT_EQ(one_sample_t_greater(std::vector<double>{0.4, 0.4}, 0.5).p_value, 1.0);
    EXPECT_GT(one_sample_t_greater(std::vector<double>{0.4, 0.45, 0.42}, 0.5).p_value, 0.5);
}

TEST(Binarize, MeanSplit) {
    const auto ids = make_ids(4);
    const std::vector<double> s{1, 2, 3, 4};
    const auto l = binarize(ids, s, SplitMode::Mean, Trait::Extraversion);
    EXPECT_DOUBLE_EQ(l.mean, 2.5);
    EXPECT_EQ(l.labels, (std::vector<int>{0, 0, 1, 1}));
    EXPECT_EQ(l.size(), 4u);
    const std::vector<double> tie{1, 2, 3};
    EXPECT_EQ(binarize(make_ids(3), tie, SplitMode::Mean, Trait::Openness).labels, (std::vector<int>{0, 1, 1}));
}

TEST(Binarize, QuartileSplit) {
    const auto ids = make_ids(8);
    const std::vector<double> s{5, 1, 8, 2, 7, 3, 6, 4};
    const auto l = binarize(ids, s, SplitMode::Quartile, Trait::Neuroticism);
    EXPECT_DOUBLE_EQ(l.q1, 2.75);
    EXPECT_DOUBLE_EQ(l.q3, 6.25);
    EXPECT_EQ(l.ids, (std::vector<std::string>{"s1", "s2", "s3", "s4"}));
    EXPECT_EQ(l.labels, (std::vector<int>{0, 1, 0, 1}));
    EXPECT_EQ(l.total_subjects, 8u);
    EXPECT_EQ(l.count(0), 2u);
    EXPECT_EQ(l.find("s4"), 3u);
    EXPECT_EQ(l.find("s0"), LabelSet::npos);
}

TEST(Binarize, DegenerateInputs) {
    const std::vector<double> flat{3, 3, 3, 3, 3};
    EXPECT_THROW(binarize(make_ids(5), flat, SplitMode::Mean, Trait::Openness), DataError);
    EXPECT_THROW(binarize(make_ids(5), flat, SplitMode::Quartile, Trait::Openness), DataError);
    const std::vector<double> three{1, 2, 3};
    EXPECT_THROW(binarize(make_ids(3), three, SplitMode::Quartile, Trait::Openness), DataError);
}

TEST(Binarize, QuartileRetentionProperty) {
    util::Rng rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 4 + util::uniform_index(rng, 300);
        std::vector<double> s(n);
        const bool discrete = trial % 2 == 0;
        for (auto& v : s) v = discrete ? 1.0 + static_cast<double>(util::uniform_index(rng, 5)) : util::normal01(rng);
        if (*std::min_element(s.begin(), s.end()) == *std::max_element(s.begin(), s.end())) continue;
        const auto l = binarize(make_ids(n), s, SplitMode::Quartile, Trait::Agreeableness);
        std::size_t below = 0, above = 0;
        for (double v : s) {
            below += v < l.q1;
            above += v > l.q3;
        }
        EXPECT_EQ(l.count(0), below);
        EXPECT_EQ(l.count(1), above);
        EXPECT_LE(l.size(), n);
        if (!discrete) {
            EXPECT_LE(l.size(), n / 2 + 2);
        }
        for (std::size_t i = 0; i < l.size(); ++i) {
            EXPECT_TRUE(l.labels[i] == 0 ? l.scores[i] < l.q1 : l.scores[i] > l.q3);
        }
    }
}

TEST(Binarize, SubsetKeepsOrder) {
    const auto ids = make_ids(6);
    const std::vector<double> s{1, 2, 3, 4, 5, 6};
    const auto l = binarize(ids, s, SplitMode::Mean, Trait::Openness);
    const std::vector<std::string> keep{"s5", "s0", "zz"};
    const auto sub = subset(l, keep);
    EXPECT_EQ(sub.ids, (std::vector<std::string>{"s0", "s5"}));
    EXPECT_EQ(sub.labels, (std::vector<int>{0, 1}));
}

TEST(Quantile, Type7) {
    const std::vector<double> v{4, 1, 3, 2};
    EXPECT_DOUBLE_EQ(quantile(v, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(quantile(v, 1.0), 4.0);
    EXPECT_DOUBLE_EQ(quantile(v, 0.5), 2.5);
    EXPECT_DOUBLE_EQ(quantile(v, 0.25), 1.75);
}

TEST(Summary, HalfSignificant) {
    std::vector<CorrelationEntry> e(kCaDim);
    for (std::size_t j = 0; j < kCaDim; ++j) {
        e[j].feature = j;
        e[j].defined = true;
        e[j].rho = j % 2 ? -0.4 : 0.2;
        e[j].significant = j < 41;
    }
    const auto s = summarize(e, FeatureFamily::CA, Trait::Openness);
    EXPECT_EQ(s.count, 41u);
    EXPECT_EQ(s.dim, 82u);
    EXPECT_DOUBLE_EQ(s.percentage, 50.0);
    EXPECT_TRUE(s.mean_defined);
    EXPECT_NEAR(s.mean_abs_rho, (21 * 0.2 + 20 * 0.4) / 41.0, 1e-12);

    for (auto& x : e) x.significant = false;
    const auto none = summarize(e, FeatureFamily::CA, Trait::Openness);
    EXPECT_FALSE(none.mean_defined);
    EXPECT_EQ(none.count, 0u);
}

TEST(Selection, CorrelateUsesFamilyDimension) {
    const auto ids = make_ids(60);
    const auto scores = normal_scores(60, 3);
    const auto m = planted_matrix(ids, scores, 3, 0.5, 4);
    const auto entries = correlate_features(m, ids, scores, Trait::Openness);
    ASSERT_EQ(entries.size(), kCaDim);
    for (const auto& x : entries) {
        EXPECT_DOUBLE_EQ(x.p_adjusted, bonferroni(x.p_raw, kCaDim));
        EXPECT_EQ(x.significant, x.p_adjusted < kSignificance);
    }
}

TEST(Selection, PlantedFeaturesAreSelected) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto ids = make_ids(200);
        const auto scores = normal_scores(200, seed);
        const auto m = planted_matrix(ids, scores, 10, 0.5, seed + 100);
        const auto mask = select_features(m, ids, scores, Trait::Extraversion);
        EXPECT_FALSE(mask.fallback);
        const std::set<std::size_t> got(mask.features.begin(), mask.features.end());
        for (std::size_t j = 0; j < 10; ++j) EXPECT_TRUE(got.count(j)) << j;
        EXPECT_TRUE(std::is_sorted(mask.features.begin(), mask.features.end()));
    }
}

TEST(Selection, NoiseSelectsAlmostNothing) {
    std::size_t total = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto ids = make_ids(150);
        const auto scores = normal_scores(150, seed);
        const auto m = planted_matrix(ids, scores, 0, 0, seed + 500);
        const auto mask = select_with_fallback(m, ids, scores, Trait::Openness);
        if (mask.fallback) {
            EXPECT_EQ(mask.features.size(), kFallbackFeatures);
            EXPECT_THROW(select_features(m, ids, scores, Trait::Openness), EmptySelectionError);
        } else {
            total += mask.features.size();
        }
    }
    EXPECT_LE(total, 5u);
}

TEST(Selection, FallbackKeepsSmallestRawP) {
    const auto ids = make_ids(40);
    const auto scores = normal_scores(40, 9);
    const auto m = planted_matrix(ids, scores, 0, 0, 10);
    const auto entries = correlate_features(m, ids, scores, Trait::Openness);
    const auto mask = select_with_fallback(m, ids, scores, Trait::Openness, 1e-12, 4);
    ASSERT_TRUE(mask.fallback);
    ASSERT_EQ(mask.features.size(), 4u);
    std::vector<std::size_t> order(kCaDim);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return entries[a].p_raw < entries[b].p_raw; });
    std::vector<std::size_t> want(order.begin(), order.begin() + 4);
    std::sort(want.begin(), want.end());
    EXPECT_EQ(mask.features, want);
}

TEST(Selection, StableAcrossResamples) {
    const auto ids = make_ids(300);
    const auto scores = normal_scores(300, 31);
    const auto m = planted_matrix(ids, scores, 10, 0.7, 32);
    util::Rng rng(33);
    std::vector<std::set<std::size_t>> picks;
    for (int r = 0; r < 6; ++r) {
        std::vector<std::size_t> idx(300);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        util::shuffle(idx.begin(), idx.end(), rng);
        std::vector<std::string> sub_ids;
        std::vector<double> sub_scores;
        for (std::size_t i = 0; i < 200; ++i) {
            sub_ids.push_back(ids[idx[i]]);
            sub_scores.push_back(scores[idx[i]]);
        }
        const auto mask = select_features(m, sub_ids, sub_scores, Trait::Openness);
        picks.emplace_back(mask.features.begin(), mask.features.end());
    }
    for (std::size_t a = 0; a < picks.size(); ++a)
        for (std::size_t b = a + 1; b < picks.size(); ++b) {
            std::size_t inter = 0;
            for (auto j : picks[a]) inter += picks[b].count(j);
            const double jaccard = static_cast<double>(inter) / static_cast<double>(picks[a].size() + picks[b].size() - inter);
            EXPECT_GE(jaccard, 0.8);
        }
}

TEST(Selection, MissingRowAndConstantColumns) {
    const auto ids = make_ids(10);
    const auto scores = normal_scores(10, 1);
    FeatureMatrix flat(FeatureFamily::CA);
    for (const auto& id : ids) flat.add_row(id, std::vector<double>(kCaDim, 1.0));
    EXPECT_THROW(select_with_fallback(flat, ids, scores, Trait::Openness), DataError);
    auto more = ids;
    more.push_back("absent");
    auto more_scores = scores;
    more_scores.push_back(0);
    EXPECT_THROW(select_with_fallback(flat, more, more_scores, Trait::Openness), DataError);
}
