#pragma once

#include <filesystem>
#include <map>
#include <ostream>
#include <string>

#include "persona/agreement/agreement.hpp"
#include "persona/pipeline/config.hpp"

namespace persona::pipeline {

/// File name -> contents, written under the output directory.
using StageOutputs = std::map<std::string, std::string>;

void write_outputs(const std::filesystem::path& dir, const StageOutputs& outputs);

/// correlation_summary.csv (per family x trait) and features.csv (per feature, with stars).
StageOutputs correlate_stage(const PipelineConfig& config);

/// evaluation.json and evaluation.csv, one report per configured trait.
StageOutputs evaluate_stage(const PipelineConfig& config, bool phow_refit = false, std::ostream* log = nullptr);

/// grid.csv and grid.json over the 15 family subsets x configured traits.
StageOutputs grid_stage(const PipelineConfig& config, bool phow_refit = false, std::ostream* log = nullptr);

struct AgreementSettings {
    std::filesystem::path ratings;
    Trait trait = Trait::Extraversion;
    agreement::Metric metric = agreement::Metric::Ordinal;
    agreement::MiddleMode middle = agreement::MiddleMode::CoinFlip;
    std::size_t resamples = 1000;
};

/// agreement.json.
StageOutputs agreement_stage(const PipelineConfig& config, const AgreementSettings& settings);

/// The machine is trained on balanced labelled subjects outside the rated
/// items and tested on the rated items that the split retains.
/// comparison.csv, raters.csv and comparison.json.
StageOutputs compare_stage(const PipelineConfig& config, const AgreementSettings& settings, bool phow_refit = false,
                           std::ostream* log = nullptr);

}  // namespace persona::pipeline
