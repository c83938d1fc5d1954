#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "persona/core/feature_store.hpp"
#include "persona/image/image.hpp"

namespace persona::phow {

inline constexpr std::size_t kDescriptorSize = 128;  // 4x4 cells x 8 orientations
using Descriptor = std::array<double, kDescriptorSize>;

struct SiftFrame {
    double x = 0, y = 0;  // patch centre, pixel coordinates
    Descriptor descriptor{};
};

/// Dense SIFT on a regular grid. Each descriptor covers 4x4 square cells of
/// `bin_size` pixels; frames start at the top-left corner and advance by
/// `step`, so each axis holds floor((side - 4*bin_size) / step) + 1 frames.
/// The image is first smoothed with sigma = bin_size / 6. Descriptors are
/// L2-normalized, clipped at 0.2 and renormalized; an all-zero gradient
/// patch yields the zero vector.
std::vector<SiftFrame> dense_sift(const image::RealPlane& gray, int bin_size, int step);

/// Frames per axis for a given side length.
constexpr int grid_count(int side, int bin_size, int step) noexcept {
    return side < 4 * bin_size ? 0 : (side - 4 * bin_size) / step + 1;
}

struct PhowConfig {
    std::array<int, 3> bin_sizes{4, 6, 8};
    int step = 4;
    int sectors = 4;  // per axis
};

inline constexpr std::size_t kVocabularySize = 20;

struct KMeansOptions {
    std::size_t clusters = kVocabularySize;
    std::size_t min_points_per_cluster = 50;
    std::size_t max_iterations = 300;
    double tolerance = 1e-4;  // largest centroid movement at convergence
};

struct Vocabulary {
    std::vector<Descriptor> centroids;
    std::size_t sample_count = 0;
    std::uint64_t seed = 0;
    std::size_t iterations = 0;
    /// Within-cluster sum of squares after each assignment step.
    std::vector<double> sse_history;

    std::size_t size() const noexcept { return centroids.size(); }
};

/// k-means with k-means++ seeding; deterministic for a given seed.
Vocabulary build_vocabulary(std::span<const Descriptor> sample, std::uint64_t seed, const KMeansOptions& options = {});

/// Index of the nearest centroid (squared Euclidean); ties go to the lowest index.
std::size_t nearest_word(const Vocabulary& vocabulary, const Descriptor& d) noexcept;

/// Serialized in the feature-store container with the Vocabulary tag.
StoreContents vocabulary_to_store(const Vocabulary& vocabulary);
Vocabulary vocabulary_from_store(const StoreContents& contents);

inline constexpr std::size_t kPhowDim = 960;

/// Per scale, each descriptor votes for its nearest word in the 4x4 sector
/// containing its centre; each (scale, sector) histogram is L1-normalized
/// (empty ones stay zero). Layout: scale-major, sector row-major, word-minor.
std::vector<double> encode_phow(const image::RealPlane& gray, const Vocabulary& vocabulary,
                                const PhowConfig& config = {});

/// Up to `per_image` descriptors drawn uniformly (seeded) from all scales of one image.
std::vector<Descriptor> sample_descriptors(const image::RealPlane& gray, const PhowConfig& config,
                                           std::size_t per_image, std::uint64_t seed);

/// Smallest side encode_phow accepts.
constexpr int min_side(const PhowConfig& c) noexcept {
    int m = 0;
    for (int b : c.bin_sizes) m = m > 4 * b ? m : 4 * b;
    return m;
}

}  // namespace persona::phow
