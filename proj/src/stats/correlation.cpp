#include "persona/stats/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "persona/error.hpp"

namespace persona::stats {

std::vector<double> midranks(std::span<const double> x) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(x.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DataError("correlation inputs differ in length");
    const double n = static_cast<double>(x.size());
    if (x.empty()) return std::nullopt;
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0 || syy <= 0) return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double correlation_p_value(double r, std::size_t n) {
    if (n < 3) throw DataError("correlation p-value needs at least 3 observations");
    if (std::abs(r) >= 1.0) return 0.0;
    const double df = static_cast<double>(n - 2);
    const double t = std::abs(r) * std::sqrt(df / (1.0 - r * r));
    const boost::math::students_t dist(df);
    return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, t)));
}

RankCorrelation spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DataError("Spearman inputs differ in length");
    if (x.size() < 3) throw DataError("Spearman needs at least 3 observations");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw DataError("Spearman inputs must be finite");
    const auto rx = midranks(x), ry = midranks(y);
    const auto r = pearson(rx, ry);
    if (!r) return RankCorrelation{};
    return RankCorrelation{true, *r, correlation_p_value(*r, x.size())};
}

double bonferroni(double p_raw, std::size_t m) {
    if (m == 0) throw UsageError("Bonferroni correction needs m >= 1");
    return std::min(1.0, static_cast<double>(m) * p_raw);
}

TTest one_sample_t_greater(std::span<const double> x, double mu0) {
    if (x.size() < 2) throw DataError("t-test needs at least 2 observations");
    const double n = static_cast<double>(x.size());
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double ss = 0;
    for (double v : x) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1));
    if (sd <= 0) {
        const bool above = mean > mu0;
        return TTest{above ? std::numeric_limits<double>::infinity() : (mean < mu0 ? -std::numeric_limits<double>::infinity() : 0.0),
                     above ? 0.0 : 1.0};
    }
    const double t = (mean - mu0) / (sd / std::sqrt(n));
    const boost::math::students_t dist(n - 1);
    return TTest{t, boost::math::cdf(boost::math::complement(dist, t))};
}

}  // namespace persona::stats
