#pragma once

#include <span>
#include <string>
#include <vector>

#include "persona/core/manifest.hpp"
#include "persona/core/traits.hpp"

namespace persona::stats {

enum class SplitMode { Mean, Quartile };

std::string_view split_name(SplitMode m) noexcept;  // "mean" / "quartile"
std::optional<SplitMode> parse_split(std::string_view s) noexcept;

/// Quantile by linear interpolation between order statistics
/// (position (n-1)q of the sorted sample).
double quantile(std::span<const double> values, double q);

/// Binary labels for one trait. Mean split keeps everyone (score < mean -> 0,
/// otherwise 1); quartile split keeps only scores strictly below Q1 (label 0)
/// or strictly above Q3 (label 1).
struct LabelSet {
    SplitMode mode = SplitMode::Mean;
    Trait trait = Trait::Openness;
    std::vector<std::string> ids;  // retained subjects, input order
    std::vector<int> labels;       // 0/1 per retained subject
    std::vector<double> scores;    // trait score per retained subject
    double mean = 0, q1 = 0, q3 = 0;
    std::size_t total_subjects = 0;

    std::size_t size() const noexcept { return ids.size(); }
    std::size_t count(int label) const noexcept;
    /// Position of a subject in `ids`, or npos.
    std::size_t find(std::string_view id) const noexcept;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

LabelSet binarize(std::span<const std::string> ids, std::span<const double> scores, SplitMode mode, Trait trait);
LabelSet binarize(const DatasetManifest& manifest, SplitMode mode, Trait trait);

/// Restricts a label set to the given subjects (kept in label-set order).
LabelSet subset(const LabelSet& labels, std::span<const std::string> keep);

}  // namespace persona::stats
