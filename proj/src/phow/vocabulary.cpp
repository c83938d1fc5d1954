#include "persona/phow/phow.hpp"

#include <cmath>
#include <limits>

#include "persona/util/rng.hpp"
#include "persona/util/text.hpp"

namespace persona::phow {
namespace {

double dist2(const Descriptor& a, const Descriptor& b) noexcept {
    double s = 0;
    for (std::size_t i = 0; i < kDescriptorSize; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

std::size_t nearest(const std::vector<Descriptor>& centroids, const Descriptor& d, double* best_d = nullptr) {
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < centroids.size(); ++k) {
        const double v = dist2(centroids[k], d);
        if (v < bd) {
            bd = v;
            best = k;
        }
    }
    if (best_d) *best_d = bd;
    return best;
}

std::vector<Descriptor> kmeans_pp(std::span<const Descriptor> x, std::size_t k, util::Rng& rng) {
    std::vector<Descriptor> c;
    c.reserve(k);
    c.push_back(x[util::uniform_index(rng, x.size())]);
    std::vector<double> d2(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) d2[i] = dist2(x[i], c[0]);
    while (c.size() < k) {
        double total = 0;
        for (double v : d2) total += v;
        std::size_t pick = 0;
        if (total <= 0) {
            pick = util::uniform_index(rng, x.size());
        } else {
            double r = util::uniform01(rng) * total;
            for (pick = 0; pick + 1 < x.size(); ++pick) {
                r -= d2[pick];
                if (r < 0) break;
            }
        }
        c.push_back(x[pick]);
        for (std::size_t i = 0; i < x.size(); ++i) d2[i] = std::min(d2[i], dist2(x[i], c.back()));
    }
    return c;
}

}  // namespace

Vocabulary build_vocabulary(std::span<const Descriptor> sample, std::uint64_t seed, const KMeansOptions& opt) {
    const std::size_t k = opt.clusters;
    if (k == 0) throw UsageError("vocabulary needs at least one word");
    const std::size_t needed = std::max(k, k * opt.min_points_per_cluster);
    if (sample.size() < needed)
        throw TooSmallError("vocabulary sample has " + std::to_string(sample.size()) + " descriptors, need at least " +
                            std::to_string(needed));

    util::Rng rng(util::derive_seed(seed, {0x766f6361ULL}));
    Vocabulary v;
    v.seed = seed;
    v.sample_count = sample.size();
    v.centroids = kmeans_pp(sample, k, rng);

    std::vector<std::size_t> assign(sample.size());
    std::vector<double> dist(sample.size());
    for (std::size_t it = 0; it < opt.max_iterations; ++it) {
        double sse = 0;
        for (std::size_t i = 0; i < sample.size(); ++i) {
            assign[i] = nearest(v.centroids, sample[i], &dist[i]);
            sse += dist[i];
        }
        v.sse_history.push_back(sse);

        std::vector<Descriptor> sums(k, Descriptor{});
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < sample.size(); ++i) {
            auto& s = sums[assign[i]];
            for (std::size_t j = 0; j < kDescriptorSize; ++j) s[j] += sample[i][j];
            ++counts[assign[i]];
        }
        double movement = 0;
        for (std::size_t c = 0; c < k; ++c) {
            Descriptor next;
            if (counts[c] == 0) {
                // Re-seed an empty cluster at the point worst served by its centroid.
                std::size_t far = 0;
                for (std::size_t i = 1; i < sample.size(); ++i)
                    if (dist[i] > dist[far]) far = i;
                next = sample[far];
                dist[far] = 0;
            } else {
                for (std::size_t j = 0; j < kDescriptorSize; ++j) next[j] = sums[c][j] / static_cast<double>(counts[c]);
            }
            movement = std::max(movement, std::sqrt(dist2(next, v.centroids[c])));
            v.centroids[c] = next;
        }
        v.iterations = it + 1;
        if (movement < opt.tolerance) break;
    }
    return v;
}

std::size_t nearest_word(const Vocabulary& vocabulary, const Descriptor& d) noexcept {
    return nearest(vocabulary.centroids, d);
}

StoreContents vocabulary_to_store(const Vocabulary& v) {
    StoreContents c;
    c.tag = StoreTag::Vocabulary;
    c.dim = static_cast<std::uint32_t>(kDescriptorSize);
    for (std::size_t k = 0; k < v.centroids.size(); ++k) {
        c.ids.push_back("word" + std::to_string(k));
        c.values.insert(c.values.end(), v.centroids[k].begin(), v.centroids[k].end());
    }
    c.metadata["sample_count"] = std::to_string(v.sample_count);
    c.metadata["seed"] = std::to_string(v.seed);
    c.metadata["iterations"] = std::to_string(v.iterations);
    return c;
}

Vocabulary vocabulary_from_store(const StoreContents& c) {
    if (c.tag != StoreTag::Vocabulary) throw DataError("store does not hold a vocabulary");
    if (c.dim != kDescriptorSize) throw DataError("vocabulary words must have 128 entries");
    Vocabulary v;
    for (std::size_t k = 0; k < c.ids.size(); ++k) {
        Descriptor d;
        std::copy_n(c.values.begin() + static_cast<std::ptrdiff_t>(k * kDescriptorSize), kDescriptorSize, d.begin());
        v.centroids.push_back(d);
    }
    auto meta = [&](const char* key) -> std::uint64_t {
        const auto it = c.metadata.find(key);
        if (it == c.metadata.end()) return 0;
        const auto n = util::parse_int(it->second);
        return n ? static_cast<std::uint64_t>(*n) : 0;
    };
    v.sample_count = meta("sample_count");
    v.seed = meta("seed");
    v.iterations = meta("iterations");
    return v;
}

}  // namespace persona::phow
