#include "persona/classify/holdout.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "persona/error.hpp"
#include "persona/util/parallel.hpp"
#include "persona/util/rng.hpp"

namespace persona::classify {

std::vector<std::string> balance(const stats::LabelSet& labels, std::uint64_t seed) {
    std::array<std::vector<std::size_t>, 2> members;
    for (std::size_t i = 0; i < labels.size(); ++i) members[static_cast<std::size_t>(labels.labels[i])].push_back(i);
    if (members[0].empty() || members[1].empty())
        throw DataError("cannot balance " + std::string(trait_name(labels.trait)) + ": class " +
                        (members[0].empty() ? "0" : "1") + " is empty");
    const std::size_t target = std::min(members[0].size(), members[1].size());
    auto& larger = members[0].size() > members[1].size() ? members[0] : members[1];
    util::Rng rng(seed);
    util::shuffle(larger.begin(), larger.end(), rng);
    larger.resize(target);

    std::vector<bool> keep(labels.size(), false);
    for (const auto& m : members)
        for (auto i : m) keep[i] = true;
    std::vector<std::string> out;
    out.reserve(2 * target);
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (keep[i]) out.push_back(labels.ids[i]);
    return out;
}

void LeakageAudit::record(std::size_t repetition, std::string_view stage, std::span<const std::string> ids) {
    std::lock_guard lock(mutex_);
    events_.push_back(Event{repetition, std::string(stage), {ids.begin(), ids.end()}});
}

std::vector<LeakageAudit::Event> LeakageAudit::events() const {
    std::lock_guard lock(mutex_);
    return events_;
}

std::vector<std::string> LeakageAudit::violations() const {
    std::lock_guard lock(mutex_);
    std::map<std::size_t, std::unordered_set<std::string>> test;
    for (const auto& e : events_)
        if (e.stage == "test") test[e.repetition].insert(e.ids.begin(), e.ids.end());
    std::vector<std::string> out;
    for (const auto& e : events_) {
        if (e.stage == "test") continue;
        const auto it = test.find(e.repetition);
        if (it == test.end()) continue;
        std::size_t leaked = 0;
        for (const auto& id : e.ids) leaked += it->second.count(id);
        if (leaked > 0)
            out.push_back("repetition " + std::to_string(e.repetition) + ": stage '" + e.stage + "' saw " +
                          std::to_string(leaked) + " test subject(s)");
    }
    return out;
}

StaticSource::StaticSource(FeatureMatrix matrix) : matrix_(std::make_shared<const FeatureMatrix>(std::move(matrix))) {}

PhowSource::PhowSource(std::map<std::string, image::RealPlane> images, phow::PhowConfig config,
                       std::size_t sample_cap, phow::KMeansOptions kmeans)
    : images_(std::move(images)), config_(config), sample_cap_(sample_cap), kmeans_(kmeans) {}

std::shared_ptr<const FeatureMatrix> PhowSource::fit(std::span<const std::string> train_ids,
                                                     const FitContext& context) const {
    if (train_ids.empty()) throw DataError("PHOW vocabulary needs training images");
    const std::size_t per_image = (sample_cap_ + train_ids.size() - 1) / train_ids.size();
    std::vector<phow::Descriptor> sample;
    for (const auto& id : train_ids) {
        const auto it = images_.find(id);
        if (it == images_.end()) throw DataError("PHOW source has no image for '" + id + "'");
        const auto d = phow::sample_descriptors(it->second, config_, per_image,
                                                util::derive_seed(context.seed, {util::hash_string(id)}));
        sample.insert(sample.end(), d.begin(), d.end());
    }
    if (context.audit) context.audit->record(context.repetition, "vocabulary", train_ids);
    const auto vocabulary =
        phow::build_vocabulary(sample, util::derive_seed(context.seed, {util::hash_string("vocabulary")}), kmeans_);

    auto matrix = std::make_shared<FeatureMatrix>(FeatureFamily::PHOW);
    for (const auto& [id, gray] : images_) matrix->add_row(id, phow::encode_phow(gray, vocabulary, config_));
    return matrix;
}

std::uint64_t family_mask(const FamilySet& families) noexcept {
    std::uint64_t m = 0;
    for (auto f : families) m |= 1ULL << static_cast<unsigned>(f);
    return m;
}

std::string family_set_name(const FamilySet& families) {
    std::string out;
    for (auto f : families) {
        if (!out.empty()) out += '-';
        out += family_name(f);
    }
    return out;
}

std::vector<FamilySet> all_family_subsets() {
    const std::array<FeatureFamily, 4> order{FeatureFamily::CA, FeatureFamily::PHOW, FeatureFamily::CNN,
                                             FeatureFamily::IATO};
    std::vector<FamilySet> out;
    for (std::size_t size = 1; size <= 4; ++size) {
        std::vector<bool> pick(4, false);
        std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(size), true);
        do {
            FamilySet s;
            for (std::size_t i = 0; i < 4; ++i)
                if (pick[i]) s.push_back(order[i]);
            out.push_back(std::move(s));
        } while (std::prev_permutation(pick.begin(), pick.end()));
    }
    return out;
}

Split stratified_split(std::span<const std::string> ids, const stats::LabelSet& labels, double fraction,
                       std::uint64_t seed) {
    if (!(fraction > 0 && fraction < 1)) throw UsageError("training fraction must lie strictly between 0 and 1");
    std::array<std::vector<std::size_t>, 2> members;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto pos = labels.find(ids[i]);
        if (pos == stats::LabelSet::npos) throw DataError("subject '" + ids[i] + "' has no label");
        members[static_cast<std::size_t>(labels.labels[pos])].push_back(i);
    }
    util::Rng rng(seed);
    std::vector<bool> in_train(ids.size(), false);
    for (auto& m : members) {
        if (m.size() < 2) throw DataError("stratified split needs at least 2 subjects per class");
        util::shuffle(m.begin(), m.end(), rng);
        const auto n_train = std::clamp<std::size_t>(
            static_cast<std::size_t>(std::llround(fraction * static_cast<double>(m.size()))), 1, m.size() - 1);
        for (std::size_t k = 0; k < n_train; ++k) in_train[m[k]] = true;
    }
    Split split;
    for (std::size_t i = 0; i < ids.size(); ++i) (in_train[i] ? split.train : split.test).push_back(ids[i]);
    return split;
}

namespace {

std::vector<const FeatureSource*> ordered_sources(std::span<const FeatureSource* const> sources) {
    if (sources.empty()) throw UsageError("no feature family selected");
    std::vector<const FeatureSource*> out(sources.begin(), sources.end());
    std::stable_sort(out.begin(), out.end(), [](auto* a, auto* b) {
        return static_cast<int>(a->family()) < static_cast<int>(b->family());
    });
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i]->family() == out[i - 1]->family())
            throw UsageError("family " + std::string(family_name(out[i]->family())) + " given twice");
    return out;
}

FamilySet families_of(const std::vector<const FeatureSource*>& sources) {
    FamilySet f;
    for (auto* s : sources) f.push_back(s->family());
    return f;
}

Design gather(const TrainedModel& model, std::span<const std::string> ids) {
    std::size_t width = 0;
    for (const auto& m : model.selection) width += m.features.size();
    Design x(ids.size(), width);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        std::size_t col = 0;
        for (std::size_t f = 0; f < model.selection.size(); ++f) {
            const auto& matrix = *model.matrices[f];
            const auto r = matrix.find(ids[i]);
            if (r == FeatureMatrix::npos)
                throw DataError(std::string(family_name(matrix.family())) + " features missing for '" + ids[i] + "'");
            const auto row = matrix.row(r);
            for (auto j : model.selection[f].features) x(i, col++) = row[j];
        }
    }
    return x;
}

}  // namespace

TrainedModel train_model(std::span<const FeatureSource* const> sources, const stats::LabelSet& labels,
                         std::span<const std::string> train_ids, const FitContext& context,
                         const HoldoutOptions& options) {
    const auto ordered = ordered_sources(sources);
    TrainedModel model;
    model.trait = labels.trait;
    model.families = families_of(ordered);
    model.seed = context.seed;

    std::vector<double> scores;
    std::vector<int> y;
    scores.reserve(train_ids.size());
    for (const auto& id : train_ids) {
        const auto pos = labels.find(id);
        if (pos == stats::LabelSet::npos) throw DataError("training subject '" + id + "' has no label");
        scores.push_back(labels.scores[pos]);
        y.push_back(labels.labels[pos]);
    }

    for (auto* source : ordered) {
        auto matrix = source->fit(train_ids, context);
        model.selection.push_back(stats::select_with_fallback(*matrix, train_ids, scores, labels.trait,
                                                              options.alpha, options.fallback));
        if (context.audit)
            context.audit->record(context.repetition, "selection:" + std::string(family_name(source->family())),
                                  train_ids);
        model.matrices.push_back(std::move(matrix));
    }

    const Design raw = gather(model, train_ids);
    model.standardizer = Standardizer::fit(raw);
    if (context.audit) context.audit->record(context.repetition, "standardization", train_ids);
    if (model.standardizer.kept.empty()) throw DataError("every selected feature is constant on the training rows");
    model.fit = train_logistic(model.standardizer.apply(raw), y, options.logistic);
    if (context.audit) context.audit->record(context.repetition, "training", train_ids);
    return model;
}

std::vector<Prediction> predict_subjects(const TrainedModel& model, std::span<const std::string> ids) {
    const Design x = model.standardizer.apply(gather(model, ids));
    std::vector<Prediction> out;
    out.reserve(ids.size());
    for (std::size_t i = 0; i < x.rows; ++i) out.push_back(predict(model.fit, x.row(i)));
    return out;
}

EvalReport holdout_eval(std::span<const FeatureSource* const> sources, const stats::LabelSet& labels,
                        std::uint64_t seed, const HoldoutOptions& options) {
    const auto ordered = ordered_sources(sources);
    if (options.repetitions < 2) throw UsageError("hold-out evaluation needs at least 2 repetitions");
    EvalReport report;
    report.trait = labels.trait;
    report.families = families_of(ordered);
    report.split = labels.mode;
    report.seed = seed;
    report.labelled = labels.size();

    std::vector<std::string> available;
    for (const auto& id : labels.ids)
        if (std::all_of(ordered.begin(), ordered.end(), [&](auto* s) { return s->contains(id); }))
            available.push_back(id);
    report.excluded = labels.size() - available.size();
    const auto usable = stats::subset(labels, available);
    const auto balanced =
        balance(usable, util::derive_seed(seed, {util::hash_string("balance"), static_cast<std::uint64_t>(labels.trait)}));
    report.balanced = balanced.size();

    const auto mask = family_mask(report.families);
    report.repetitions.resize(options.repetitions);
    util::parallel_for(options.repetitions, options.workers, [&](std::size_t, std::size_t r) {
        const auto rep_seed = util::derive_seed(seed, {r, static_cast<std::uint64_t>(labels.trait), mask});
        const auto split =
            stratified_split(balanced, usable, options.train_fraction, util::derive_seed(rep_seed, {1}));
        if (options.audit) options.audit->record(r, "test", split.test);
        const FitContext context{r, rep_seed, options.audit};
        const auto model = train_model(ordered, usable, split.train, context, options);
        const auto predictions = predict_subjects(model, split.test);

        std::vector<int> truth, predicted;
        for (std::size_t i = 0; i < split.test.size(); ++i) {
            truth.push_back(usable.labels[usable.find(split.test[i])]);
            predicted.push_back(predictions[i].label);
        }
        auto& out = report.repetitions[r];
        out.train_size = split.train.size();
        out.test_size = split.test.size();
        for (const auto& m : model.selection) {
            out.selected += m.features.size();
            out.fallback = out.fallback || m.fallback;
        }
        out.metrics = binary_metrics(truth, predicted);
    });

    std::vector<double> accuracies;
    for (const auto& r : report.repetitions) {
        accuracies.push_back(r.metrics.accuracy);
        report.mean_accuracy += r.metrics.accuracy;
        report.mean_f1 += r.metrics.f1;
    }
    report.mean_accuracy /= static_cast<double>(options.repetitions);
    report.mean_f1 /= static_cast<double>(options.repetitions);
    report.chance = stats::one_sample_t_greater(accuracies, 0.5);
    return report;
}

std::vector<Prediction> train_and_predict(std::span<const FeatureSource* const> sources,
                                          const stats::LabelSet& labels, std::span<const std::string> train_ids,
                                          std::span<const std::string> test_ids, std::uint64_t seed,
                                          const HoldoutOptions& options) {
    if (options.audit) options.audit->record(0, "test", test_ids);
    const auto model = train_model(sources, labels, train_ids, FitContext{0, seed, options.audit}, options);
    return predict_subjects(model, test_ids);
}

std::vector<GridCell> family_grid(std::span<const FeatureSource* const> sources,
                                  std::span<const stats::LabelSet> labelsets, std::uint64_t seed,
                                  const std::vector<FamilySet>& subsets, const HoldoutOptions& options) {
    std::map<FeatureFamily, const FeatureSource*> by_family;
    for (auto* s : sources) by_family[s->family()] = s;
    std::vector<GridCell> cells;
    for (const auto& subset : subsets) {
        std::vector<const FeatureSource*> chosen;
        for (auto f : subset) {
            const auto it = by_family.find(f);
            if (it == by_family.end())
                throw DataError("grid row " + family_set_name(subset) + " needs the " + std::string(family_name(f)) +
                                " matrix, which was not provided");
            chosen.push_back(it->second);
        }
        for (const auto& labels : labelsets)
            cells.push_back(GridCell{subset, labels.trait, holdout_eval(chosen, labels, seed, options)});
    }
    return cells;
}

}  // namespace persona::classify
