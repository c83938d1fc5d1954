#include "persona/pipeline/report.hpp"

#include <cmath>
#include <cstdio>

#include "persona/ca/ca.hpp"
#include "persona/error.hpp"

namespace persona::pipeline {

std::string fixed(double v, int digits) {
    if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    std::string s = buf;
    if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
    return s;
}

std::string stars(double p) { return p < 0.01 ? "**" : (p < 0.05 ? "*" : ""); }

std::vector<CorrelationCell> correlate_all(const std::map<FeatureFamily, FeatureMatrix>& matrices,
                                           const DatasetManifest& manifest, const std::vector<Trait>& traits,
                                           stats::SplitMode split) {
    std::vector<CorrelationCell> out;
    for (const auto& [family, matrix] : matrices) {
        for (Trait t : traits) {
            std::vector<std::string> present;
            std::vector<double> scores;
            for (const auto& r : manifest.records())
                if (matrix.contains(r.subject_id)) {
                    present.push_back(r.subject_id);
                    scores.push_back(r.traits[t]);
                }
            if (present.size() < 4) throw DataError(std::string(family_name(family)) + " store shares fewer than 4 subjects with the manifest");
            const auto labels = stats::binarize(present, scores, split, t);
            CorrelationCell cell;
            cell.family = family;
            cell.trait = t;
            cell.subjects = labels.size();
            cell.entries = stats::correlate_features(matrix, labels.ids, labels.scores, t);
            cell.summary = stats::summarize(cell.entries, family, t);
            out.push_back(std::move(cell));
        }
    }
    return out;
}

std::string correlation_summary_csv(const std::vector<CorrelationCell>& cells) {
    std::string out = "family,trait,subjects,mean_abs_rho,count,dim,percent\n";
    for (const auto& c : cells) {
        const auto& s = c.summary;
        out += std::string(family_name(c.family)) + ',' + trait_code(c.trait) + ',' + std::to_string(c.subjects) + ',' +
               (s.mean_defined ? fixed(s.mean_abs_rho) : "") + ',' + std::to_string(s.count) + ',' +
               std::to_string(s.dim) + ',' + fixed(s.percentage, 1) + '\n';
    }
    return out;
}

std::string correlation_feature_csv(const std::vector<CorrelationCell>& cells) {
    const auto ca_names = ca::ca_feature_names();
    std::string out = "family,feature,name,trait,rho,p_raw,p_adjusted,stars\n";
    for (const auto& c : cells)
        for (const auto& e : c.entries) {
            std::string name = c.family == FeatureFamily::CA ? ca_names[e.feature]
                                                             : std::string(family_name(c.family)) + "_" + std::to_string(e.feature);
            out += std::string(family_name(c.family)) + ',' + std::to_string(e.feature) + ',' + name + ',' +
                   trait_code(c.trait) + ',' + (e.defined ? fixed(e.rho) : "") + ',' +
                   (e.defined ? fixed(e.p_raw, 6) : "") + ',' + (e.defined ? fixed(e.p_adjusted, 6) : "") + ',' +
                   (e.significant ? stars(e.p_adjusted) : "") + '\n';
        }
    return out;
}

nlohmann::ordered_json eval_json(const classify::EvalReport& r) {
    nlohmann::ordered_json j;
    j["trait"] = std::string(1, trait_code(r.trait));
    j["families"] = classify::family_set_name(r.families);
    j["split"] = std::string(stats::split_name(r.split));
    j["seed"] = r.seed;
    j["labelled"] = r.labelled;
    j["excluded"] = r.excluded;
    j["balanced"] = r.balanced;
    j["mean_accuracy"] = r.mean_accuracy;
    j["mean_f1"] = r.mean_f1;
    j["t_statistic"] = std::isfinite(r.chance.statistic) ? nlohmann::ordered_json(r.chance.statistic) : nlohmann::ordered_json(nullptr);
    j["p_chance"] = r.chance.p_value;
    auto& reps = j["repetitions"] = nlohmann::ordered_json::array();
    for (const auto& rep : r.repetitions)
        reps.push_back({{"accuracy", rep.metrics.accuracy},
                        {"f1", rep.metrics.f1},
                        {"train", rep.train_size},
                        {"test", rep.test_size},
                        {"selected", rep.selected},
                        {"fallback", rep.fallback}});
    return j;
}

std::string eval_csv(const std::vector<classify::EvalReport>& reports) {
    std::string out = "trait,families,split,accuracy,f1,p_chance\n";
    for (const auto& r : reports)
        out += std::string(1, trait_code(r.trait)) + ',' + classify::family_set_name(r.families) + ',' +
               std::string(stats::split_name(r.split)) + ',' + fixed(r.mean_accuracy) + ',' + fixed(r.mean_f1) + ',' +
               fixed(r.chance.p_value, 6) + '\n';
    return out;
}

std::string grid_csv(const std::vector<classify::GridCell>& cells) {
    std::vector<std::string> order;
    std::map<std::string, std::array<std::string, 5>> rows;
    for (const auto& c : cells) {
        const auto name = classify::family_set_name(c.families);
        if (!rows.count(name)) order.push_back(name);
        rows[name][index_of(c.trait)] = fixed(c.report.mean_accuracy);
    }
    std::string out = "families,O,C,E,A,N\n";
    for (const auto& name : order) {
        out += name;
        for (const auto& v : rows[name]) out += ',' + v;
        out += '\n';
    }
    return out;
}

nlohmann::ordered_json alpha_json(const agreement::AlphaResult& a, agreement::Metric metric, Trait trait) {
    nlohmann::ordered_json j;
    j["trait"] = std::string(1, trait_code(trait));
    j["metric"] = std::string(agreement::metric_name(metric));
    j["alpha"] = a.alpha;
    j["ci_low"] = a.ci_low;
    j["ci_high"] = a.ci_high;
    j["resamples"] = a.resamples;
    j["pairable_values"] = a.pairable;
    j["significant"] = a.significant();
    return j;
}

std::string comparison_csv(const agreement::ComparisonReport& r) {
    std::string out =
        "trait,human_mean_accuracy,human_mean_f1,human_max_accuracy,human_max_f1,machine_accuracy,machine_f1,alpha,"
        "alpha_ci_low,alpha_ci_high\n";
    out += std::string(1, trait_code(r.trait)) + ',' + fixed(r.human_mean_accuracy) + ',' + fixed(r.human_mean_f1) +
           ',' + fixed(r.human_max_accuracy) + ',' + fixed(r.human_max_f1) + ',' + fixed(r.machine.accuracy) + ',' +
           fixed(r.machine.f1) + ',' + fixed(r.alpha.alpha) + ',' + fixed(r.alpha.ci_low) + ',' +
           fixed(r.alpha.ci_high) + '\n';
    return out;
}

std::string rater_csv(const agreement::ComparisonReport& r) {
    std::string out = "rater,accuracy,f1,scored,middle\n";
    for (const auto& x : r.raters)
        out += x.rater + ',' + fixed(x.metrics.accuracy) + ',' + fixed(x.metrics.f1) + ',' + std::to_string(x.scored) +
               ',' + std::to_string(x.middle) + '\n';
    return out;
}

}  // namespace persona::pipeline
