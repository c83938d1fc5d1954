#include "persona/agreement/agreement.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "persona/error.hpp"
#include "persona/util/parallel.hpp"
#include "persona/util/rng.hpp"
#include "persona/util/text.hpp"

namespace persona::agreement {

namespace {
constexpr std::size_t kLevels = kScaleMax - kScaleMin + 1;

std::size_t index_in(const std::vector<std::string>& v, std::string_view id) {
    const auto it = std::find(v.begin(), v.end(), id);
    return it == v.end() ? RatingMatrix::npos : static_cast<std::size_t>(it - v.begin());
}
}  // namespace

RatingMatrix::RatingMatrix(std::vector<std::string> rater_ids, std::vector<std::string> item_ids)
    : raters(std::move(rater_ids)), items(std::move(item_ids)), scores(raters.size() * items.size()) {}

std::size_t RatingMatrix::rater_index(std::string_view id) const { return index_in(raters, id); }
std::size_t RatingMatrix::item_index(std::string_view id) const { return index_in(items, id); }

RatingMatrix parse_ratings(std::string_view text, Trait trait) {
    const auto lines = util::split_lines(text);
    struct Entry {
        std::size_t rater, item;
        int score;
    };
    std::vector<std::string> raters, items;
    std::unordered_map<std::string, std::size_t> rater_pos, item_pos;
    std::vector<Entry> entries;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    bool header = false;
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const auto line = util::trim(lines[ln]);
        if (line.empty() || line.front() == '#') continue;
        const auto where = "ratings line " + std::to_string(ln + 1) + ": ";
        const auto cols = util::split_csv(line);
        if (!header) {
            if (cols.size() != 3 || util::trim(cols[0]) != "rater_id" || util::trim(cols[1]) != "item_id" ||
                util::trim(cols[2]) != "score")
                throw DataError(where + "expected header 'rater_id,item_id,score'");
            header = true;
            continue;
        }
        if (cols.size() != 3) throw DataError(where + "expected 3 columns, found " + std::to_string(cols.size()));
        const std::string rater(util::trim(cols[0])), item(util::trim(cols[1]));
        if (rater.empty() || item.empty()) throw DataError(where + "empty rater or item id");
        const auto score = util::parse_int(util::trim(cols[2]));
        if (!score || *score < kScaleMin || *score > kScaleMax)
            throw DataError(where + "score must be an integer in [" + std::to_string(kScaleMin) + ", " +
                            std::to_string(kScaleMax) + "]");
        auto [ri, rnew] = rater_pos.try_emplace(rater, raters.size());
        if (rnew) raters.push_back(rater);
        auto [ii, inew] = item_pos.try_emplace(item, items.size());
        if (inew) items.push_back(item);
        if (!seen.emplace(ri->second, ii->second).second)
            throw DataError(where + "rater '" + rater + "' scored item '" + item + "' twice");
        entries.push_back({ri->second, ii->second, static_cast<int>(*score)});
    }
    if (!header) throw DataError("ratings file is empty");
    RatingMatrix m(std::move(raters), std::move(items));
    m.trait = trait;
    for (const auto& e : entries) m.at(e.rater, e.item) = e.score;
    return m;
}

RatingMatrix read_ratings(const std::string& path, Trait trait) { return parse_ratings(util::read_file(path), trait); }

std::string format_ratings(const RatingMatrix& m) {
    std::string out = "rater_id,item_id,score\n";
    for (std::size_t r = 0; r < m.raters.size(); ++r)
        for (std::size_t i = 0; i < m.items.size(); ++i)
            if (const auto& s = m.at(r, i)) out += m.raters[r] + "," + m.items[i] + "," + std::to_string(*s) + "\n";
    return out;
}

std::string_view metric_name(Metric m) noexcept {
    switch (m) {
        case Metric::Nominal: return "nominal";
        case Metric::Ordinal: return "ordinal";
        case Metric::Interval: return "interval";
    }
    return "?";
}

std::optional<Metric> parse_metric(std::string_view s) noexcept {
    if (s == "nominal") return Metric::Nominal;
    if (s == "ordinal") return Metric::Ordinal;
    if (s == "interval") return Metric::Interval;
    return std::nullopt;
}

Coincidence coincidence(const RatingMatrix& m, std::span<const std::size_t> items) {
    Coincidence c;
    c.o.assign(kLevels, std::vector<double>(kLevels, 0.0));
    c.marginals.assign(kLevels, 0.0);
    std::vector<std::size_t> counts(kLevels);
    for (auto item : items) {
        std::fill(counts.begin(), counts.end(), 0);
        std::size_t mu = 0;
        for (std::size_t r = 0; r < m.raters.size(); ++r)
            if (const auto& s = m.at(r, item)) {
                ++counts[static_cast<std::size_t>(*s - kScaleMin)];
                ++mu;
            }
        if (mu < 2) continue;
        const double w = 1.0 / static_cast<double>(mu - 1);
        for (std::size_t a = 0; a < kLevels; ++a)
            for (std::size_t b = 0; b < kLevels; ++b) {
                const double pairs = a == b ? static_cast<double>(counts[a]) * (static_cast<double>(counts[a]) - 1)
                                            : static_cast<double>(counts[a]) * static_cast<double>(counts[b]);
                c.o[a][b] += pairs * w;
            }
    }
    for (std::size_t a = 0; a < kLevels; ++a)
        for (std::size_t b = 0; b < kLevels; ++b) c.marginals[a] += c.o[a][b];
    for (double v : c.marginals) c.total += v;
    return c;
}

double delta2(Metric metric, int c, int k, std::span<const double> marginals) {
    switch (metric) {
        case Metric::Nominal: return c == k ? 0.0 : 1.0;
        case Metric::Interval: return static_cast<double>((c - k) * (c - k));
        case Metric::Ordinal: {
            const int lo = std::min(c, k), hi = std::max(c, k);
            double s = 0;
            for (int g = lo; g <= hi; ++g) s += marginals[static_cast<std::size_t>(g - kScaleMin)];
            s -= (marginals[static_cast<std::size_t>(lo - kScaleMin)] + marginals[static_cast<std::size_t>(hi - kScaleMin)]) / 2.0;
            return s * s;
        }
    }
    return 0.0;
}

namespace {

std::optional<double> alpha_of(const RatingMatrix& m, Metric metric, std::span<const std::size_t> items) {
    const auto c = coincidence(m, items);
    if (c.total < 2) return std::nullopt;
    double observed = 0, expected = 0;
    for (std::size_t a = 0; a < kLevels; ++a)
        for (std::size_t b = 0; b < kLevels; ++b) {
            const double d = delta2(metric, static_cast<int>(a) + kScaleMin, static_cast<int>(b) + kScaleMin, c.marginals);
            observed += c.o[a][b] * d;
            expected += c.marginals[a] * c.marginals[b] * d;
        }
    if (expected <= 0) return std::nullopt;
    return 1.0 - (c.total - 1.0) * observed / expected;
}

std::vector<std::size_t> all_items(const RatingMatrix& m) {
    std::vector<std::size_t> v(m.items.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
    return v;
}

}  // namespace

double alpha_point(const RatingMatrix& m, Metric metric) {
    const auto items = all_items(m);
    const auto a = alpha_of(m, metric, items);
    if (!a) {
        if (coincidence(m, items).total < 2) throw DataError("alpha is undefined: fewer than two pairable values");
        throw DataError("alpha is undefined: the pairable values show no variation");
    }
    return *a;
}

AlphaResult krippendorff_alpha(const RatingMatrix& m, Metric metric, std::uint64_t seed, std::size_t resamples,
                               std::size_t workers) {
    AlphaResult result;
    result.alpha = alpha_point(m, metric);
    const auto items = all_items(m);
    result.pairable = coincidence(m, items).total;
    std::vector<std::optional<double>> boot(resamples);
    util::parallel_for(resamples, workers, [&](std::size_t, std::size_t b) {
        util::Rng rng(util::derive_seed(seed, {b}));
        std::vector<std::size_t> pick(items.size());
        for (auto& p : pick) p = util::uniform_index(rng, items.size());
        boot[b] = alpha_of(m, metric, pick);
    });
    std::vector<double> values;
    for (const auto& v : boot)
        if (v) values.push_back(*v);
    result.resamples = values.size();
    if (values.empty()) {
        result.ci_low = result.ci_high = result.alpha;
    } else {
        result.ci_low = stats::quantile(values, 0.025);
        result.ci_high = stats::quantile(values, 0.975);
    }
    return result;
}

RaterResult rater_as_classifier(const RatingMatrix& m, std::size_t rater, const stats::LabelSet& truth,
                                std::uint64_t seed, MiddleMode mode) {
    if (rater >= m.raters.size()) throw DataError("rater index out of range");
    RaterResult out;
    out.rater = m.raters[rater];
    util::Rng rng(util::derive_seed(seed, {util::hash_string(out.rater)}));
    std::vector<int> t, p;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const auto item = m.item_index(truth.ids[i]);
        if (item == RatingMatrix::npos || !m.at(rater, item))
            throw DataError("rater '" + out.rater + "' did not score item '" + truth.ids[i] + "'");
        const int s = *m.at(rater, item);
        int label;
        if (s >= 4) {
            label = 1;
        } else if (s <= 2) {
            label = 0;
        } else {
            ++out.middle;
            if (mode == MiddleMode::Drop) continue;
            label = util::uniform01(rng) < 0.5 ? 1 : 0;
        }
        t.push_back(truth.labels[i]);
        p.push_back(label);
    }
    out.scored = t.size();
    if (t.empty()) throw DataError("rater '" + out.rater + "' has no decisive ratings on the test items");
    out.metrics = classify::binary_metrics(t, p);
    return out;
}

ComparisonReport compare_human_machine(const RatingMatrix& m, const stats::LabelSet& truth,
                                       std::span<const std::string> machine_ids,
                                       std::span<const int> machine_labels, std::uint64_t seed, Metric metric,
                                       MiddleMode mode, std::size_t resamples) {
    if (machine_ids.size() != machine_labels.size()) throw DataError("machine ids and labels differ in length");
    const std::set<std::string> a(truth.ids.begin(), truth.ids.end()), b(machine_ids.begin(), machine_ids.end());
    if (a != b || a.size() != truth.size() || b.size() != machine_ids.size())
        throw DataError("machine predictions and ground truth cover different item sets");
    if (m.raters.empty()) throw DataError("no raters");

    ComparisonReport report;
    report.trait = truth.trait;
    report.metric = metric;
    for (std::size_t r = 0; r < m.raters.size(); ++r) {
        report.raters.push_back(rater_as_classifier(m, r, truth, seed, mode));
        const auto& mt = report.raters.back().metrics;
        report.human_mean_accuracy += mt.accuracy;
        report.human_mean_f1 += mt.f1;
        report.human_max_accuracy = std::max(report.human_max_accuracy, mt.accuracy);
        report.human_max_f1 = std::max(report.human_max_f1, mt.f1);
    }
    report.human_mean_accuracy /= static_cast<double>(m.raters.size());
    report.human_mean_f1 /= static_cast<double>(m.raters.size());

    std::unordered_map<std::string, int> predicted;
    for (std::size_t i = 0; i < machine_ids.size(); ++i) predicted[machine_ids[i]] = machine_labels[i];
    std::vector<int> p;
    for (const auto& id : truth.ids) p.push_back(predicted.at(id));
    report.machine = classify::binary_metrics(truth.labels, p);
    report.alpha = krippendorff_alpha(m, metric, seed, resamples);
    return report;
}

}  // namespace persona::agreement
