#include "persona/pipeline/config.hpp"

#include <algorithm>

#include "persona/error.hpp"
#include "persona/util/parallel.hpp"
#include "persona/util/text.hpp"

namespace persona::pipeline {

std::vector<FeatureFamily> parse_family_list(std::string_view s) {
    std::vector<FeatureFamily> out;
    for (auto part : util::split_csv(s)) {
        part = util::trim(part);
        if (part.empty()) continue;
        const auto f = parse_family(part);
        if (!f) throw UsageError("unknown feature family '" + std::string(part) + "' (expected ca, phow, cnn, iato)");
        if (std::find(out.begin(), out.end(), *f) != out.end())
            throw UsageError("feature family '" + std::string(part) + "' listed twice");
        out.push_back(*f);
    }
    if (out.empty()) throw UsageError("no feature family given");
    std::sort(out.begin(), out.end(), [](auto a, auto b) { return static_cast<int>(a) < static_cast<int>(b); });
    return out;
}

std::vector<Trait> parse_trait_list(std::string_view s) {
    if (util::trim(s) == "all") return {kAllTraits.begin(), kAllTraits.end()};
    std::vector<Trait> out;
    for (auto part : util::split_csv(s)) {
        part = util::trim(part);
        if (part.empty()) continue;
        const auto t = parse_trait(part);
        if (!t) throw UsageError("unknown trait '" + std::string(part) + "' (expected O, C, E, A, N)");
        if (std::find(out.begin(), out.end(), *t) == out.end()) out.push_back(*t);
    }
    if (out.empty()) throw UsageError("no trait given");
    std::sort(out.begin(), out.end(), [](auto a, auto b) { return index_of(a) < index_of(b); });
    return out;
}

void apply_setting(PipelineConfig& c, std::string_view key, std::string_view value) {
    const std::string v(util::trim(value));
    auto count = [&](std::string_view what) {
        const auto n = util::parse_int(v);
        if (!n || *n < 0) throw UsageError(std::string(what) + " must be a non-negative integer, got '" + v + "'");
        return static_cast<std::size_t>(*n);
    };
    if (key == "manifest") c.manifest = v;
    else if (key == "store_dir") c.store_dir = v;
    else if (key == "output_dir") c.output_dir = v;
    else if (key == "cascade") c.cascade = v;
    else if (key == "colors") c.colors = v;
    else if (key == "embeddings") c.embeddings = v;
    else if (key == "vocabulary") c.vocabulary = v;
    else if (key == "families") c.families = parse_family_list(v);
    else if (key == "traits") c.traits = parse_trait_list(v);
    else if (key == "split") {
        const auto s = stats::parse_split(v);
        if (!s) throw UsageError("split must be 'mean' or 'quartile', got '" + v + "'");
        c.split = *s;
    } else if (key == "seed") {
        c.seed = count("seed");
    } else if (key == "workers") {
        c.workers = count("workers");
    } else if (key == "phow_sample") {
        c.phow_sample = count("phow_sample");
    } else {
        throw UsageError("unknown configuration key '" + std::string(key) + "'");
    }
}

PipelineConfig parse_config(std::string_view text, PipelineConfig base) {
    const auto lines = util::split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto line = lines[i];
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = util::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw UsageError("config line " + std::to_string(i + 1) + ": expected 'key = value'");
        try {
            apply_setting(base, util::trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const UsageError& e) {
            throw UsageError("config line " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return base;
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
    return parse_config(util::read_file(path.string()), std::move(base));
}

std::size_t effective_workers(const PipelineConfig& config) {
    return config.workers == 0 ? util::default_workers() : config.workers;
}

}  // namespace persona::pipeline
