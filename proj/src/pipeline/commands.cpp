#include "persona/pipeline/commands.hpp"

#include <set>

#include "persona/core/feature_store.hpp"
#include "persona/error.hpp"
#include "persona/pipeline/extract.hpp"
#include "persona/pipeline/report.hpp"
#include "persona/util/rng.hpp"
#include "persona/util/text.hpp"

namespace persona::pipeline {

namespace fs = std::filesystem;

void write_outputs(const fs::path& dir, const StageOutputs& outputs) {
    fs::create_directories(dir);
    for (const auto& [name, contents] : outputs) util::write_file((dir / name).string(), contents);
}

namespace {

DatasetManifest manifest_of(const PipelineConfig& config) {
    if (config.manifest.empty()) throw UsageError("no manifest given");
    return load_manifest(config.manifest);
}

std::vector<const classify::FeatureSource*> raw(const std::vector<std::unique_ptr<classify::FeatureSource>>& v) {
    std::vector<const classify::FeatureSource*> out;
    for (const auto& s : v) out.push_back(s.get());
    return out;
}

classify::HoldoutOptions holdout_options(const PipelineConfig& config) {
    classify::HoldoutOptions o;
    o.workers = effective_workers(config);
    return o;
}

}  // namespace

StageOutputs correlate_stage(const PipelineConfig& config) {
    const auto manifest = manifest_of(config);
    std::map<FeatureFamily, FeatureMatrix> matrices;
    for (auto f : config.families) {
        const auto path = store_path(config.store_dir, f);
        if (!fs::exists(path)) throw DataError("missing feature store " + path.string() + " (run extract first)");
        matrices.emplace(f, read_feature_store(path));
    }
    const auto cells = correlate_all(matrices, manifest, config.traits, config.split);
    return {{"correlation_summary.csv", correlation_summary_csv(cells)}, {"features.csv", correlation_feature_csv(cells)}};
}

StageOutputs evaluate_stage(const PipelineConfig& config, bool phow_refit, std::ostream* log) {
    const auto manifest = manifest_of(config);
    const auto owned = load_sources(config, manifest, phow_refit, log);
    const auto sources = raw(owned);
    std::vector<classify::EvalReport> reports;
    auto json = nlohmann::ordered_json::array();
    for (Trait t : config.traits) {
        const auto labels = stats::binarize(manifest, config.split, t);
        reports.push_back(classify::holdout_eval(sources, labels, config.seed, holdout_options(config)));
        json.push_back(eval_json(reports.back()));
        if (log)
            *log << trait_code(t) << ' ' << classify::family_set_name(reports.back().families) << " accuracy "
                 << fixed(reports.back().mean_accuracy) << " f1 " << fixed(reports.back().mean_f1) << '\n';
    }
    return {{"evaluation.json", json.dump(2) + "\n"}, {"evaluation.csv", eval_csv(reports)}};
}

StageOutputs grid_stage(const PipelineConfig& config, bool phow_refit, std::ostream* log) {
    const auto manifest = manifest_of(config);
    const auto owned = load_sources(config, manifest, phow_refit, log);
    const auto sources = raw(owned);
    std::vector<stats::LabelSet> labelsets;
    for (Trait t : config.traits) labelsets.push_back(stats::binarize(manifest, config.split, t));
    std::vector<classify::FamilySet> subsets;
    for (auto& s : classify::all_family_subsets()) {
        const bool available = std::all_of(s.begin(), s.end(), [&](auto f) {
            return std::find(config.families.begin(), config.families.end(), f) != config.families.end();
        });
        if (available) subsets.push_back(s);
    }
    const auto cells = classify::family_grid(sources, labelsets, config.seed, subsets, holdout_options(config));
    auto json = nlohmann::ordered_json::array();
    for (const auto& c : cells) json.push_back(eval_json(c.report));
    return {{"grid.csv", grid_csv(cells)}, {"grid.json", json.dump(2) + "\n"}};
}

StageOutputs agreement_stage(const PipelineConfig& config, const AgreementSettings& s) {
    const auto m = agreement::read_ratings(s.ratings.string(), s.trait);
    const auto alpha = agreement::krippendorff_alpha(m, s.metric, config.seed, s.resamples, effective_workers(config));
    auto j = alpha_json(alpha, s.metric, s.trait);
    j["raters"] = m.raters.size();
    j["items"] = m.items.size();
    return {{"agreement.json", j.dump(2) + "\n"}};
}

StageOutputs compare_stage(const PipelineConfig& config, const AgreementSettings& s, bool phow_refit,
                           std::ostream* log) {
    const auto manifest = manifest_of(config);
    const auto m = agreement::read_ratings(s.ratings.string(), s.trait);
    const auto owned = load_sources(config, manifest, phow_refit, log);
    const auto sources = raw(owned);

    const auto labels = stats::binarize(manifest, config.split, s.trait);
    const std::set<std::string> rated(m.items.begin(), m.items.end());
    std::vector<std::string> test, pool;
    for (const auto& id : labels.ids) {
        const bool covered = std::all_of(sources.begin(), sources.end(), [&](auto* src) { return src->contains(id); });
        if (rated.count(id)) {
            if (!covered) throw DataError("rated item '" + id + "' has no features");
            test.push_back(id);
        } else if (covered) {
            pool.push_back(id);
        }
    }
    if (test.empty()) throw DataError("no rated item survives the " + std::string(stats::split_name(config.split)) + " split");
    if (log && test.size() < m.items.size())
        *log << (m.items.size() - test.size()) << " rated item(s) fall inside the split's dropped band and are ignored\n";

    const auto truth = stats::subset(labels, test);
    const auto train = classify::balance(stats::subset(labels, pool),
                                         util::derive_seed(config.seed, {util::hash_string("compare")}));
    const auto predictions = classify::train_and_predict(sources, labels, train, truth.ids, config.seed,
                                                         holdout_options(config));
    std::vector<int> machine;
    for (const auto& p : predictions) machine.push_back(p.label);

    const auto report = agreement::compare_human_machine(m, truth, truth.ids, machine, config.seed, s.metric, s.middle,
                                                         s.resamples);
    nlohmann::ordered_json j;
    j["trait"] = std::string(1, trait_code(s.trait));
    j["test_items"] = truth.size();
    j["train_subjects"] = train.size();
    j["human_mean_accuracy"] = report.human_mean_accuracy;
    j["human_mean_f1"] = report.human_mean_f1;
    j["human_max_accuracy"] = report.human_max_accuracy;
    j["human_max_f1"] = report.human_max_f1;
    j["machine_accuracy"] = report.machine.accuracy;
    j["machine_f1"] = report.machine.f1;
    j["alpha"] = alpha_json(report.alpha, s.metric, s.trait);
    return {{"comparison.csv", comparison_csv(report)},
            {"raters.csv", rater_csv(report)},
            {"comparison.json", j.dump(2) + "\n"}};
}

}  // namespace persona::pipeline
