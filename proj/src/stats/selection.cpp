#include "persona/stats/selection.hpp"

#include <algorithm>
#include <numeric>

#include "persona/stats/correlation.hpp"

namespace persona::stats {

std::vector<CorrelationEntry> correlate_features(const FeatureMatrix& matrix, std::span<const std::string> ids,
                                                 std::span<const double> scores, Trait trait, double alpha) {
    if (ids.size() != scores.size()) throw DataError("ids and scores differ in length");
    const std::size_t m = matrix.dim();
    std::vector<std::size_t> rows;
    rows.reserve(ids.size());
    for (const auto& id : ids) {
        const auto r = matrix.find(id);
        if (r == FeatureMatrix::npos)
            throw DataError(std::string(family_name(matrix.family())) + " matrix has no row for '" + id + "'");
        rows.push_back(r);
    }
    std::vector<CorrelationEntry> out(m);
    std::vector<double> column(rows.size());
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < rows.size(); ++i) column[i] = matrix.data()[rows[i] * m + j];
        const auto rc = spearman(column, scores);
        auto& e = out[j];
        e.feature = j;
        e.trait = trait;
        e.defined = rc.defined;
        e.rho = rc.rho;
        e.p_raw = rc.p_value;
        e.p_adjusted = bonferroni(rc.p_value, m);
        e.significant = rc.defined && e.p_adjusted < alpha;
    }
    return out;
}

CorrelationSummary summarize(const std::vector<CorrelationEntry>& entries, FeatureFamily family, Trait trait) {
    CorrelationSummary s;
    s.family = family;
    s.trait = trait;
    s.dim = entries.size();
    double sum = 0;
    for (const auto& e : entries)
        if (e.significant) {
            ++s.count;
            sum += std::abs(e.rho);
        }
    s.mean_defined = s.count > 0;
    s.mean_abs_rho = s.count > 0 ? sum / static_cast<double>(s.count) : 0.0;
    s.percentage = s.dim > 0 ? 100.0 * static_cast<double>(s.count) / static_cast<double>(s.dim) : 0.0;
    return s;
}

SelectionMask select_features(const FeatureMatrix& matrix, std::span<const std::string> train_ids,
                              std::span<const double> train_scores, Trait trait, double alpha) {
    const auto entries = correlate_features(matrix, train_ids, train_scores, trait, alpha);
    SelectionMask mask{trait, matrix.family(), {}, false};
    for (const auto& e : entries)
        if (e.significant) mask.features.push_back(e.feature);
    if (mask.features.empty()) throw EmptySelectionError();
    return mask;
}

SelectionMask select_with_fallback(const FeatureMatrix& matrix, std::span<const std::string> train_ids,
                                   std::span<const double> train_scores, Trait trait, double alpha,
                                   std::size_t fallback) {
    const auto entries = correlate_features(matrix, train_ids, train_scores, trait, alpha);
    SelectionMask mask{trait, matrix.family(), {}, false};
    for (const auto& e : entries)
        if (e.significant) mask.features.push_back(e.feature);
    if (!mask.features.empty()) return mask;

    std::vector<std::size_t> order;
    for (const auto& e : entries)
        if (e.defined) order.push_back(e.feature);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return entries[a].p_raw < entries[b].p_raw; });
    order.resize(std::min(order.size(), fallback));
    std::sort(order.begin(), order.end());
    mask.features = std::move(order);
    mask.fallback = true;
    if (mask.features.empty())
        throw DataError("every " + std::string(family_name(matrix.family())) + " feature is constant on the training rows");
    return mask;
}

}  // namespace persona::stats
