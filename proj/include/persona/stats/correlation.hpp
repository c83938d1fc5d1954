#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace persona::stats {

/// Mid-ranks (1-based; tied values share the mean of their positions).
std::vector<double> midranks(std::span<const double> x);

/// Pearson correlation; nullopt when either input has zero variance.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

struct RankCorrelation {
    bool defined = false;  // false when either input is constant
    double rho = 0.0;
    double p_value = 1.0;  // two-sided, t-approximation with n-2 df
};

/// Spearman's rho with a two-sided p-value from
/// t = rho * sqrt((n - 2) / (1 - rho^2)). Requires equal lengths >= 3.
RankCorrelation spearman(std::span<const double> x, std::span<const double> y);

/// Two-sided p-value of a correlation coefficient under the t-approximation.
double correlation_p_value(double r, std::size_t n);

/// min(1, m * p).
double bonferroni(double p_raw, std::size_t m);

struct TTest {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// One-sample t-test of mean(x) against mu0; the alternative is mean > mu0.
/// Zero-variance samples give p = 0 when the mean exceeds mu0, else 1.
TTest one_sample_t_greater(std::span<const double> x, double mu0);

}  // namespace persona::stats
