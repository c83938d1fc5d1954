#include "persona/stats/binarize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace persona::stats {

std::string_view split_name(SplitMode m) noexcept { return m == SplitMode::Mean ? "mean" : "quartile"; }

std::optional<SplitMode> parse_split(std::string_view s) noexcept {
    if (s == "mean") return SplitMode::Mean;
    if (s == "quartile") return SplitMode::Quartile;
    return std::nullopt;
}

double quantile(std::span<const double> values, double q) {
    if (values.empty()) throw DataError("quantile of an empty sample");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const double pos = (static_cast<double>(v.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

std::size_t LabelSet::count(int label) const noexcept {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

std::size_t LabelSet::find(std::string_view id) const noexcept {
    for (std::size_t i = 0; i < ids.size(); ++i)
        if (ids[i] == id) return i;
    return npos;
}

LabelSet binarize(std::span<const std::string> ids, std::span<const double> scores, SplitMode mode, Trait trait) {
    if (ids.size() != scores.size()) throw DataError("ids and scores differ in length");
    if (scores.empty()) throw DataError("cannot binarize an empty sample");
    if (mode == SplitMode::Quartile && scores.size() < 4) throw DataError("quartile split needs at least 4 subjects");
    const auto [mn, mx] = std::minmax_element(scores.begin(), scores.end());
    if (*mn == *mx) throw DataError("degenerate split: all " + std::string(trait_name(trait)) + " scores are equal");

    LabelSet out;
    out.mode = mode;
    out.trait = trait;
    out.total_subjects = scores.size();
    out.mean = std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size());
    out.q1 = quantile(scores, 0.25);
    out.q3 = quantile(scores, 0.75);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        int label;
        if (mode == SplitMode::Mean) {
            label = scores[i] < out.mean ? 0 : 1;
        } else if (scores[i] < out.q1) {
            label = 0;
        } else if (scores[i] > out.q3) {
            label = 1;
        } else {
            continue;
        }
        out.ids.push_back(ids[i]);
        out.labels.push_back(label);
        out.scores.push_back(scores[i]);
    }
    return out;
}

LabelSet binarize(const DatasetManifest& manifest, SplitMode mode, Trait trait) {
    const auto ids = manifest.ids();
    const auto scores = manifest.scores(trait);
    return binarize(ids, scores, mode, trait);
}

LabelSet subset(const LabelSet& labels, std::span<const std::string> keep) {
    const std::unordered_set<std::string> wanted(keep.begin(), keep.end());
    LabelSet out = labels;
    out.ids.clear();
    out.labels.clear();
    out.scores.clear();
    for (std::size_t i = 0; i < labels.ids.size(); ++i)
        if (wanted.count(labels.ids[i])) {
            out.ids.push_back(labels.ids[i]);
            out.labels.push_back(labels.labels[i]);
            out.scores.push_back(labels.scores[i]);
        }
    return out;
}

}  // namespace persona::stats
