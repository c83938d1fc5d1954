#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "persona/core/feature_matrix.hpp"
#include "persona/core/manifest.hpp"

namespace persona::embed {

/// Result of binding an embedding file to a manifest.
struct EmbeddingImport {
    FeatureMatrix matrix{FeatureFamily::CNN};   // rows in manifest order
    std::vector<std::string> missing_ids;       // in the manifest, absent from the file
};

/// Reads 4096-dim embeddings from either the feature-store container
/// (family tag CNN) or the CSV fallback `subject_id,v0,...,v4095`, detected
/// from the leading bytes. Ids absent from the manifest are rejected.
EmbeddingImport import_embeddings(const std::filesystem::path& path, const DatasetManifest& manifest);

/// Same, from in-memory bytes.
EmbeddingImport import_embeddings_bytes(std::string_view bytes, const DatasetManifest& manifest);

/// Parses the CSV fallback into an unbound matrix (file order).
FeatureMatrix parse_embedding_csv(std::string_view text);

std::string format_embedding_csv(const FeatureMatrix& matrix);

}  // namespace persona::embed
