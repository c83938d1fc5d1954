#pragma once

#include <span>
#include <string>
#include <vector>

#include "persona/core/feature_matrix.hpp"
#include "persona/core/traits.hpp"
#include "persona/error.hpp"

namespace persona::stats {

inline constexpr double kSignificance = 0.05;

struct CorrelationEntry {
    std::size_t feature = 0;
    Trait trait = Trait::Openness;
    bool defined = false;
    double rho = 0;
    double p_raw = 1;
    double p_adjusted = 1;
    bool significant = false;  // p_adjusted < alpha
};

/// Spearman correlation of every column against the scores, over the given
/// subjects, Bonferroni-adjusted with m = matrix dimension.
std::vector<CorrelationEntry> correlate_features(const FeatureMatrix& matrix, std::span<const std::string> ids,
                                                 std::span<const double> scores, Trait trait,
                                                 double alpha = kSignificance);

struct CorrelationSummary {
    FeatureFamily family = FeatureFamily::CA;
    Trait trait = Trait::Openness;
    bool mean_defined = false;     // false when nothing is significant
    double mean_abs_rho = 0;       // over significant entries
    std::size_t count = 0;
    std::size_t dim = 0;
    double percentage = 0;         // 100 * count / dim
};

CorrelationSummary summarize(const std::vector<CorrelationEntry>& entries, FeatureFamily family, Trait trait);

struct SelectionMask {
    Trait trait = Trait::Openness;
    FeatureFamily family = FeatureFamily::CA;
    std::vector<std::size_t> features;  // ascending
    bool fallback = false;              // true when the smallest-p fallback was used
};

class EmptySelectionError : public DataError {
public:
    EmptySelectionError()
        : DataError("no feature is significant after Bonferroni correction; use select_with_fallback to keep the "
                    "smallest-p features instead") {}
};

/// Features whose Bonferroni-adjusted p is below alpha (m = family dimension).
/// Throws EmptySelectionError when nothing survives.
SelectionMask select_features(const FeatureMatrix& matrix, std::span<const std::string> train_ids,
                              std::span<const double> train_scores, Trait trait, double alpha = kSignificance);

inline constexpr std::size_t kFallbackFeatures = 10;

/// select_features, falling back to the `fallback` features with the
/// smallest raw p-value (defined correlations only) when nothing survives.
SelectionMask select_with_fallback(const FeatureMatrix& matrix, std::span<const std::string> train_ids,
                                   std::span<const double> train_scores, Trait trait, double alpha = kSignificance,
                                   std::size_t fallback = kFallbackFeatures);

}  // namespace persona::stats
