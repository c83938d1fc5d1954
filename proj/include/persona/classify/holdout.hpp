#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "persona/classify/logistic.hpp"
#include "persona/classify/metrics.hpp"
#include "persona/core/feature_matrix.hpp"
#include "persona/phow/phow.hpp"
#include "persona/stats/binarize.hpp"
#include "persona/stats/correlation.hpp"
#include "persona/stats/selection.hpp"

namespace persona::classify {

/// Subsamples the larger class (without replacement) down to the smaller
/// one. Returned ids keep label-set order.
std::vector<std::string> balance(const stats::LabelSet& labels, std::uint64_t seed);

/// Records which subjects each fitting stage saw, per repetition. The "test"
/// stage holds the held-out ids; every other stage must be disjoint from it.
class LeakageAudit {
public:
    struct Event {
        std::size_t repetition = 0;
        std::string stage;
        std::vector<std::string> ids;
    };

    void record(std::size_t repetition, std::string_view stage, std::span<const std::string> ids);
    std::vector<Event> events() const;
    /// One message per (repetition, stage) that touched a test id.
    std::vector<std::string> violations() const;

private:
    mutable std::mutex mutex_;
    std::vector<Event> events_;
};

struct FitContext {
    std::size_t repetition = 0;
    std::uint64_t seed = 0;
    LeakageAudit* audit = nullptr;
};

/// Features of one family for one repetition. Sources with a learned
/// component fit it on the training ids only.
class FeatureSource {
public:
    virtual ~FeatureSource() = default;
    virtual FeatureFamily family() const = 0;
    virtual bool contains(std::string_view id) const = 0;
    virtual std::shared_ptr<const FeatureMatrix> fit(std::span<const std::string> train_ids,
                                                     const FitContext& context) const = 0;
};

class StaticSource final : public FeatureSource {
public:
    explicit StaticSource(FeatureMatrix matrix);
    FeatureFamily family() const override { return matrix_->family(); }
    bool contains(std::string_view id) const override { return matrix_->contains(id); }
    std::shared_ptr<const FeatureMatrix> fit(std::span<const std::string>, const FitContext&) const override {
        return matrix_;
    }

private:
    std::shared_ptr<const FeatureMatrix> matrix_;
};

/// PHOW with the vocabulary retrained on each repetition's training images.
class PhowSource final : public FeatureSource {
public:
    PhowSource(std::map<std::string, image::RealPlane> images, phow::PhowConfig config = {},
               std::size_t sample_cap = 2000, phow::KMeansOptions kmeans = {});
    FeatureFamily family() const override { return FeatureFamily::PHOW; }
    bool contains(std::string_view id) const override { return images_.count(std::string(id)) > 0; }
    std::shared_ptr<const FeatureMatrix> fit(std::span<const std::string> train_ids,
                                             const FitContext& context) const override;

private:
    std::map<std::string, image::RealPlane> images_;
    phow::PhowConfig config_;
    std::size_t sample_cap_;
    phow::KMeansOptions kmeans_;
};

using FamilySet = std::vector<FeatureFamily>;

/// Bit per family (CA=1, PHOW=2, CNN=4, IATO=8).
std::uint64_t family_mask(const FamilySet& families) noexcept;
std::string family_set_name(const FamilySet& families);  // e.g. "CA-PHOW"

/// The 15 non-empty subsets: singles, pairs, triples, then all four.
std::vector<FamilySet> all_family_subsets();

struct HoldoutOptions {
    std::size_t repetitions = 10;
    double train_fraction = 0.75;
    double alpha = stats::kSignificance;
    std::size_t fallback = stats::kFallbackFeatures;
    LogisticOptions logistic{};
    std::size_t workers = 1;
    LeakageAudit* audit = nullptr;
};

struct TrainedModel {
    Trait trait = Trait::Openness;
    FamilySet families;
    std::uint64_t seed = 0;
    std::vector<stats::SelectionMask> selection;  // one per family, in family order
    std::vector<std::shared_ptr<const FeatureMatrix>> matrices;  // as fitted, one per family
    Standardizer standardizer;                   // over the concatenated selected columns
    LogisticFit fit;
};

struct RepetitionResult {
    std::size_t train_size = 0, test_size = 0;
    std::size_t selected = 0;   // concatenated columns before dropping constants
    bool fallback = false;      // any family fell back to smallest-p features
    BinaryMetrics metrics;
};

struct EvalReport {
    Trait trait = Trait::Openness;
    FamilySet families;
    stats::SplitMode split = stats::SplitMode::Mean;
    std::uint64_t seed = 0;
    std::size_t labelled = 0;   // subjects in the label set
    std::size_t excluded = 0;   // labelled subjects missing from some family
    std::size_t balanced = 0;   // subjects after balancing
    std::vector<RepetitionResult> repetitions;
    double mean_accuracy = 0;
    double mean_f1 = 0;
    stats::TTest chance;        // accuracies vs 0.5, one-sided
};

/// Stratified split of the given ids: round(fraction * class size) of each
/// class to training, at least one per class on each side.
struct Split {
    std::vector<std::string> train, test;
};
Split stratified_split(std::span<const std::string> ids, const stats::LabelSet& labels, double fraction,
                       std::uint64_t seed);

/// Selects, standardizes and trains on `train_ids`.
TrainedModel train_model(std::span<const FeatureSource* const> sources, const stats::LabelSet& labels,
                         std::span<const std::string> train_ids, const FitContext& context,
                         const HoldoutOptions& options = {});

/// Predictions for subjects present in every fitted matrix.
std::vector<Prediction> predict_subjects(const TrainedModel& model, std::span<const std::string> ids);

/// Balance, then per repetition: stratified split, per-family selection,
/// standardization and training on the training rows, metrics on the test rows.
EvalReport holdout_eval(std::span<const FeatureSource* const> sources, const stats::LabelSet& labels,
                        std::uint64_t seed, const HoldoutOptions& options = {});

/// Trains on `train_ids` and predicts `test_ids`; used for the human-machine comparison.
std::vector<Prediction> train_and_predict(std::span<const FeatureSource* const> sources,
                                          const stats::LabelSet& labels, std::span<const std::string> train_ids,
                                          std::span<const std::string> test_ids, std::uint64_t seed,
                                          const HoldoutOptions& options = {});

struct GridCell {
    FamilySet families;
    Trait trait = Trait::Openness;
    EvalReport report;
};

/// holdout_eval for each requested subset x trait. Throws DataError when a
/// subset names a family without a source.
std::vector<GridCell> family_grid(std::span<const FeatureSource* const> sources,
                                  std::span<const stats::LabelSet> labelsets, std::uint64_t seed,
                                  const std::vector<FamilySet>& subsets = all_family_subsets(),
                                  const HoldoutOptions& options = {});

}  // namespace persona::classify
