#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "persona/agreement/agreement.hpp"
#include "persona/classify/holdout.hpp"
#include "persona/core/feature_matrix.hpp"
#include "persona/core/manifest.hpp"
#include "persona/stats/binarize.hpp"
#include "persona/stats/selection.hpp"

namespace persona::pipeline {

struct CorrelationCell {
    FeatureFamily family = FeatureFamily::CA;
    Trait trait = Trait::Openness;
    std::size_t subjects = 0;
    std::vector<stats::CorrelationEntry> entries;
    stats::CorrelationSummary summary;
};

/// Spearman of every feature against each trait's scores, over the subjects
/// the split retains (everyone for the mean split).
std::vector<CorrelationCell> correlate_all(const std::map<FeatureFamily, FeatureMatrix>& matrices,
                                           const DatasetManifest& manifest, const std::vector<Trait>& traits,
                                           stats::SplitMode split);

std::string fixed(double v, int digits = 4);
std::string stars(double p_adjusted);  // "**" < 0.01, "*" < 0.05

/// family,trait,subjects,mean_abs_rho,count,dim,percent
std::string correlation_summary_csv(const std::vector<CorrelationCell>& cells);
/// family,feature,name,trait,rho,p_raw,p_adjusted,stars
std::string correlation_feature_csv(const std::vector<CorrelationCell>& cells);

nlohmann::ordered_json eval_json(const classify::EvalReport& report);
/// trait,families,split,accuracy,f1,p_chance (one row per report)
std::string eval_csv(const std::vector<classify::EvalReport>& reports);
/// families,O,C,E,A,N mean accuracies (blank where a trait was not run)
std::string grid_csv(const std::vector<classify::GridCell>& cells);

nlohmann::ordered_json alpha_json(const agreement::AlphaResult& alpha, agreement::Metric metric, Trait trait);
std::string comparison_csv(const agreement::ComparisonReport& report);
std::string rater_csv(const agreement::ComparisonReport& report);

}  // namespace persona::pipeline
