#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "persona/classify/metrics.hpp"
#include "persona/core/traits.hpp"
#include "persona/stats/binarize.hpp"

namespace persona::agreement {

inline constexpr int kScaleMin = 1;
inline constexpr int kScaleMax = 5;

/// Raters x items grid of scores in [kScaleMin, kScaleMax]; missing allowed.
struct RatingMatrix {
    Trait trait = Trait::Extraversion;
    std::vector<std::string> raters;
    std::vector<std::string> items;
    std::vector<std::optional<int>> scores;  // row-major, raters x items

    RatingMatrix() = default;
    RatingMatrix(std::vector<std::string> rater_ids, std::vector<std::string> item_ids);

    std::optional<int>& at(std::size_t rater, std::size_t item) { return scores[rater * items.size() + item]; }
    const std::optional<int>& at(std::size_t rater, std::size_t item) const {
        return scores[rater * items.size() + item];
    }
    std::size_t rater_index(std::string_view id) const;  // npos if absent
    std::size_t item_index(std::string_view id) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// `rater_id,item_id,score` with a header row; raters and items keep first-appearance order.
RatingMatrix parse_ratings(std::string_view text, Trait trait);
RatingMatrix read_ratings(const std::string& path, Trait trait);
std::string format_ratings(const RatingMatrix& m);

enum class Metric { Nominal, Ordinal, Interval };
std::string_view metric_name(Metric m) noexcept;
std::optional<Metric> parse_metric(std::string_view s) noexcept;

/// Coincidence matrix over the scale values; units with fewer than two
/// scores contribute nothing.
struct Coincidence {
    std::vector<std::vector<double>> o;  // (kScaleMax - kScaleMin + 1)^2
    std::vector<double> marginals;
    double total = 0;                    // pairable values n
};
Coincidence coincidence(const RatingMatrix& m, std::span<const std::size_t> items);

/// Squared difference between scale values c and k under the metric.
double delta2(Metric metric, int c, int k, std::span<const double> marginals);

struct AlphaResult {
    double alpha = 0;
    double ci_low = 0, ci_high = 0;  // percentile bootstrap over items
    std::size_t resamples = 0;        // resamples with a defined alpha
    double pairable = 0;

    bool significant() const noexcept { return ci_low > 0 || ci_high < 0; }
};

/// Point estimate only. Throws DataError when fewer than two pairable values
/// exist or the pairable values show no variation.
double alpha_point(const RatingMatrix& m, Metric metric);

AlphaResult krippendorff_alpha(const RatingMatrix& m, Metric metric, std::uint64_t seed = 1,
                               std::size_t resamples = 1000, std::size_t workers = 1);

enum class MiddleMode { CoinFlip, Drop };

struct RaterResult {
    std::string rater;
    classify::BinaryMetrics metrics;
    std::size_t scored = 0;   // items compared with the truth
    std::size_t middle = 0;   // items rated 3
};

/// Rating >= 4 predicts 1, <= 2 predicts 0; a 3 is a seeded coin flip or
/// dropped. Every truth id must be rated by the rater.
RaterResult rater_as_classifier(const RatingMatrix& m, std::size_t rater, const stats::LabelSet& truth,
                                std::uint64_t seed, MiddleMode mode = MiddleMode::CoinFlip);

struct ComparisonReport {
    Trait trait = Trait::Extraversion;
    std::vector<RaterResult> raters;
    double human_mean_accuracy = 0, human_mean_f1 = 0;
    double human_max_accuracy = 0, human_max_f1 = 0;
    classify::BinaryMetrics machine;
    AlphaResult alpha;
    Metric metric = Metric::Ordinal;
};

/// `machine_ids`/`machine_labels` must cover exactly the truth ids.
ComparisonReport compare_human_machine(const RatingMatrix& m, const stats::LabelSet& truth,
                                       std::span<const std::string> machine_ids,
                                       std::span<const int> machine_labels, std::uint64_t seed,
                                       Metric metric = Metric::Ordinal, MiddleMode mode = MiddleMode::CoinFlip,
                                       std::size_t resamples = 1000);

}  // namespace persona::agreement
