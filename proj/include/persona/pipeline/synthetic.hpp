#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "persona/agreement/agreement.hpp"
#include "persona/core/manifest.hpp"
#include "persona/image/image.hpp"

namespace persona::pipeline {

/// Rendering parameters, each in (0, 1).
inline constexpr std::array<std::string_view, 6> kSyntheticParams{"warmth", "brightness", "saturation",
                                                                  "texture", "stripes", "quality"};
using SyntheticParams = std::array<double, kSyntheticParams.size()>;

/// Parameter p = Phi(w z + sqrt(1 - w^2) e), z the trait's standard score and
/// e independent noise. Uncoupled parameters use w = 0.
struct Coupling {
    Trait trait = Trait::Extraversion;
    std::size_t param = 0;
    double weight = 0;
};

/// "E:warmth=0.95,N:texture=-0.5"; empty or "none" means no signal.
std::vector<Coupling> parse_signal_spec(std::string_view spec);

struct SyntheticOptions {
    int width = 64;
    int height = 64;
    std::vector<Coupling> signal;
};

image::RgbImage render_synthetic(const SyntheticParams& params, int width, int height, std::uint64_t seed);
int synthetic_quality(double quality_param) noexcept;  // JPEG quality 35..95

/// Writes `dir/images/sNNNNN.jpg` and `dir/manifest.csv`; returns the loaded manifest.
/// Trait scores are 3 + 0.6 z clamped to [1, 5].
DatasetManifest generate_synthetic_corpus(const std::filesystem::path& dir, std::size_t n, std::uint64_t seed,
                                          const SyntheticOptions& options = {});

/// Raters who report the truth label flipped with probability `flip`: label 1
/// becomes 4 or 5, label 0 becomes 1 or 2, and with probability `middle`
/// the rater answers 3 instead.
agreement::RatingMatrix synthetic_ratings(const stats::LabelSet& truth, std::size_t raters, double flip,
                                          double middle, std::uint64_t seed);

}  // namespace persona::pipeline
