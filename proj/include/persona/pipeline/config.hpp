#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "persona/core/feature_matrix.hpp"
#include "persona/core/traits.hpp"
#include "persona/stats/binarize.hpp"

namespace persona::pipeline {

struct PipelineConfig {
    std::filesystem::path manifest;
    std::filesystem::path store_dir = "stores";
    std::filesystem::path output_dir = "out";
    std::filesystem::path cascade;     // empty: bundled model
    std::filesystem::path colors;      // empty: built-in prototypes
    std::filesystem::path embeddings;  // required for the CNN family
    std::filesystem::path vocabulary;  // empty: train one during extraction
    std::vector<FeatureFamily> families{FeatureFamily::CA, FeatureFamily::PHOW, FeatureFamily::IATO};
    stats::SplitMode split = stats::SplitMode::Quartile;
    std::vector<Trait> traits{kAllTraits.begin(), kAllTraits.end()};
    std::uint64_t seed = 1;
    std::size_t workers = 0;           // 0: hardware concurrency
    std::size_t phow_sample = 2000;    // descriptors used to train a vocabulary
};

/// Sets one key; throws UsageError for unknown keys or bad values.
void apply_setting(PipelineConfig& config, std::string_view key, std::string_view value);

/// Flat `key = value` lines; '#' starts a comment.
PipelineConfig parse_config(std::string_view text, PipelineConfig base = {});
PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = {});

std::vector<FeatureFamily> parse_family_list(std::string_view s);  // "ca,phow"
std::vector<Trait> parse_trait_list(std::string_view s);           // "E,N" or "all"

std::size_t effective_workers(const PipelineConfig& config);

}  // namespace persona::pipeline
