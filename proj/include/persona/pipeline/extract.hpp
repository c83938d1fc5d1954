#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "persona/classify/holdout.hpp"
#include "persona/core/feature_matrix.hpp"
#include "persona/core/manifest.hpp"
#include "persona/phow/phow.hpp"
#include "persona/pipeline/config.hpp"

namespace persona::pipeline {

std::filesystem::path store_path(const std::filesystem::path& dir, FeatureFamily family);  // dir/ca.pfs, ...
std::filesystem::path vocabulary_path(const std::filesystem::path& dir);                 // dir/phow_vocabulary.pfs

struct SkippedImage {
    std::string id;
    std::string reason;
};

struct ExtractResult {
    std::map<FeatureFamily, FeatureMatrix> matrices;
    std::vector<SkippedImage> skipped;
    std::size_t processed = 0;
};

/// Image decoded into the planes the extractors need.
image::RealPlane phow_plane(const image::RgbImage& rgb);

/// Trains a vocabulary on descriptors sampled from the given planes.
phow::Vocabulary train_vocabulary(const std::vector<const image::RealPlane*>& planes, std::size_t sample_cap,
                                  std::uint64_t seed, const phow::PhowConfig& config = {});

/// Extracts every configured family for every manifest image, in manifest
/// order. Images that fail are logged and skipped in all families. Throws
/// UsageError if CNN is requested without an embeddings file and DataError
/// if no image succeeds.
ExtractResult extract_features(const PipelineConfig& config, const DatasetManifest& manifest,
                               std::ostream* log = nullptr);

/// extract_features, then one store per family (and the PHOW vocabulary) in config.store_dir.
ExtractResult run_extract(const PipelineConfig& config, std::ostream* log = nullptr);

/// Feature sources for evaluation: stored matrices, or PHOW with the
/// vocabulary refitted per repetition when `phow_refit` is set.
std::vector<std::unique_ptr<classify::FeatureSource>> load_sources(const PipelineConfig& config,
                                                                   const DatasetManifest& manifest,
                                                                   bool phow_refit, std::ostream* log = nullptr);

}  // namespace persona::pipeline
