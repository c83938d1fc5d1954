#include "persona/phow/phow.hpp"

#include <algorithm>
#include <cmath>

#include "persona/util/rng.hpp"

namespace persona::phow {

std::vector<double> encode_phow(const image::RealPlane& gray, const Vocabulary& vocabulary, const PhowConfig& config) {
    if (vocabulary.size() != kVocabularySize)
        throw UsageError("PHOW encoding needs a " + std::to_string(kVocabularySize) + "-word vocabulary, got " +
                         std::to_string(vocabulary.size()));
    if (config.sectors != 4) throw UsageError("PHOW encoding uses a 4x4 sector grid");
    const std::size_t words = vocabulary.size();
    const std::size_t sectors = static_cast<std::size_t>(config.sectors) * config.sectors;
    const std::size_t block = words;
    std::vector<double> out(config.bin_sizes.size() * sectors * block, 0.0);
    const int w = gray.width(), h = gray.height();

    for (std::size_t s = 0; s < config.bin_sizes.size(); ++s) {
        const auto frames = dense_sift(gray, config.bin_sizes[s], config.step);
        for (const auto& f : frames) {
            const int sx = std::min(config.sectors - 1, static_cast<int>(std::floor(f.x * config.sectors / w)));
            const int sy = std::min(config.sectors - 1, static_cast<int>(std::floor(f.y * config.sectors / h)));
            const std::size_t sector = static_cast<std::size_t>(sy) * config.sectors + sx;
            out[(s * sectors + sector) * block + nearest_word(vocabulary, f.descriptor)] += 1.0;
        }
        for (std::size_t sector = 0; sector < sectors; ++sector) {
            const auto first = out.begin() + static_cast<std::ptrdiff_t>((s * sectors + sector) * block);
            double total = 0;
            for (auto it = first; it != first + static_cast<std::ptrdiff_t>(block); ++it) total += *it;
            if (total > 0)
                for (auto it = first; it != first + static_cast<std::ptrdiff_t>(block); ++it) *it /= total;
        }
    }
    if (out.size() != kPhowDim) throw InvariantError("PHOW vector has " + std::to_string(out.size()) + " entries");
    return out;
}

std::vector<Descriptor> sample_descriptors(const image::RealPlane& gray, const PhowConfig& config,
                                           std::size_t per_image, std::uint64_t seed) {
    std::vector<Descriptor> all;
    for (int b : config.bin_sizes)
        for (auto& f : dense_sift(gray, b, config.step)) all.push_back(f.descriptor);
    if (all.size() <= per_image) return all;
    util::Rng rng(seed);
    util::shuffle(all.begin(), all.end(), rng);
    all.resize(per_image);
    return all;
}

}  // namespace persona::phow
