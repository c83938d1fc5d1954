#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "persona/core/feature_matrix.hpp"

namespace persona {

/// Content tag written into the container header.
enum class StoreTag : std::uint8_t { CA = 0, PHOW = 1, CNN = 2, IATO = 3, Vocabulary = 16 };

/// Raw container contents. Layout (all integers little-endian):
///   "PFSTORE\0" | u32 version | u8 tag | u32 dim | u64 rows | u64 value_count
///   | u32 metadata pairs, each (u32 len, bytes) x 2
///   | rows x (u32 len, id bytes)
///   | value_count x f64 (row-major)
///   | u64 FNV-1a checksum of everything before it
struct StoreContents {
    StoreTag tag = StoreTag::CA;
    std::uint32_t dim = 0;
    std::vector<std::string> ids;
    std::vector<double> values;
    std::map<std::string, std::string> metadata;

    bool operator==(const StoreContents&) const = default;
};

inline constexpr std::uint32_t kStoreVersion = 1;

std::string encode_store(const StoreContents& contents);
StoreContents decode_store(std::string_view bytes);

void write_store(const StoreContents& contents, const std::filesystem::path& path);
StoreContents read_store(const std::filesystem::path& path);

void write_feature_store(const FeatureMatrix& matrix, const std::filesystem::path& path);
FeatureMatrix read_feature_store(const std::filesystem::path& path);

FeatureMatrix to_matrix(const StoreContents& contents);
StoreContents to_contents(const FeatureMatrix& matrix);

}  // namespace persona
