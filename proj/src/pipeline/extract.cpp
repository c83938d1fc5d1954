#include "persona/pipeline/extract.hpp"

#include <optional>

#include "persona/ca/ca.hpp"
#include "persona/core/feature_store.hpp"
#include "persona/embed/embedding_import.hpp"
#include "persona/error.hpp"
#include "persona/iato/jpeg_scan.hpp"
#include "persona/util/parallel.hpp"
#include "persona/util/rng.hpp"
#include "persona/util/text.hpp"

namespace persona::pipeline {

namespace fs = std::filesystem;

fs::path store_path(const fs::path& dir, FeatureFamily family) {
    std::string name(family_name(family));
    for (auto& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return dir / (name + ".pfs");
}

fs::path vocabulary_path(const fs::path& dir) { return dir / "phow_vocabulary.pfs"; }

image::RealPlane phow_plane(const image::RgbImage& rgb) { return image::to_real(image::to_gray(rgb), 1.0 / 255.0); }

phow::Vocabulary train_vocabulary(const std::vector<const image::RealPlane*>& planes, std::size_t sample_cap,
                                  std::uint64_t seed, const phow::PhowConfig& config) {
    if (planes.empty()) throw DataError("no images to train a PHOW vocabulary on");
    const std::size_t per_image = (sample_cap + planes.size() - 1) / planes.size();
    std::vector<phow::Descriptor> sample;
    for (std::size_t i = 0; i < planes.size(); ++i) {
        const auto d = phow::sample_descriptors(*planes[i], config, per_image, util::derive_seed(seed, {i}));
        sample.insert(sample.end(), d.begin(), d.end());
    }
    return phow::build_vocabulary(sample, util::derive_seed(seed, {util::hash_string("vocabulary")}));
}

namespace {

bool wants(const PipelineConfig& c, FeatureFamily f) {
    return std::find(c.families.begin(), c.families.end(), f) != c.families.end();
}

struct ImageResult {
    std::optional<std::string> error;
    std::vector<double> ca, iato;
    image::RealPlane plane;
};

}  // namespace

ExtractResult extract_features(const PipelineConfig& config, const DatasetManifest& manifest, std::ostream* log) {
    const bool want_ca = wants(config, FeatureFamily::CA), want_phow = wants(config, FeatureFamily::PHOW),
               want_iato = wants(config, FeatureFamily::IATO), want_cnn = wants(config, FeatureFamily::CNN);
    if (want_cnn && config.embeddings.empty())
        throw UsageError("the CNN family needs an embeddings file (set 'embeddings')");
    if (manifest.size() == 0) throw DataError("manifest lists no images");

    const auto cascade = config.cascade.empty() ? ca::default_cascade_path() : config.cascade;
    const auto colors = config.colors.empty() ? ca::ColorNameTable::defaults() : ca::ColorNameTable::load(config.colors);
    const std::size_t workers = std::min(effective_workers(config), manifest.size());
    std::vector<std::unique_ptr<ca::CaExtractor>> extractors(workers);
    if (want_ca)
        for (auto& e : extractors) e = std::make_unique<ca::CaExtractor>(cascade, colors);

    const auto& records = manifest.records();
    std::vector<ImageResult> results(records.size());
    util::parallel_for(records.size(), workers, [&](std::size_t w, std::size_t i) {
        auto& out = results[i];
        try {
            const auto text = util::read_file(records[i].image_path);
            const std::span<const std::uint8_t> bytes(reinterpret_cast<const std::uint8_t*>(text.data()), text.size());
            if (want_iato) out.iato = iato::extract_iato(bytes);
            if (want_ca || want_phow) {
                const auto rgb = image::decode_image(bytes);
                if (want_ca) out.ca = extractors[w]->extract(rgb);
                if (want_phow) {
                    const phow::PhowConfig pc;
                    if (rgb.width() < phow::min_side(pc) || rgb.height() < phow::min_side(pc))
                        throw TooSmallError("image is smaller than the largest PHOW descriptor (" +
                                            std::to_string(phow::min_side(pc)) + " px)");
                    out.plane = phow_plane(rgb);
                }
            }
        } catch (const Error& e) {
            out.error = e.what();
        } catch (const std::exception& e) {
            out.error = e.what();
        }
    });

    ExtractResult result;
    std::vector<std::size_t> ok;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (results[i].error) {
            result.skipped.push_back({records[i].subject_id, *results[i].error});
            if (log) *log << "skip " << records[i].subject_id << ": " << *results[i].error << '\n';
        } else {
            ok.push_back(i);
        }
    }
    result.processed = ok.size();
    if (ok.empty()) throw DataError("no image could be processed (" + std::to_string(records.size()) + " failed)");

    if (want_ca) {
        FeatureMatrix m(FeatureFamily::CA);
        for (auto i : ok) m.add_row(records[i].subject_id, results[i].ca);
        result.matrices.emplace(FeatureFamily::CA, std::move(m));
    }
    if (want_iato) {
        FeatureMatrix m(FeatureFamily::IATO);
        for (auto i : ok) m.add_row(records[i].subject_id, results[i].iato);
        result.matrices.emplace(FeatureFamily::IATO, std::move(m));
    }
    if (want_phow) {
        phow::Vocabulary vocabulary;
        if (!config.vocabulary.empty()) {
            vocabulary = phow::vocabulary_from_store(read_store(config.vocabulary));
        } else {
            std::vector<const image::RealPlane*> planes;
            for (auto i : ok) planes.push_back(&results[i].plane);
            vocabulary = train_vocabulary(planes, config.phow_sample, util::derive_seed(config.seed, {util::hash_string("phow")}));
        }
        std::vector<std::vector<double>> rows(ok.size());
        util::parallel_for(ok.size(), workers,
                           [&](std::size_t, std::size_t k) { rows[k] = phow::encode_phow(results[ok[k]].plane, vocabulary); });
        FeatureMatrix m(FeatureFamily::PHOW);
        for (std::size_t k = 0; k < ok.size(); ++k) m.add_row(records[ok[k]].subject_id, rows[k]);
        result.matrices.emplace(FeatureFamily::PHOW, std::move(m));
        if (config.vocabulary.empty()) {
            fs::create_directories(config.store_dir);
            write_store(phow::vocabulary_to_store(vocabulary), vocabulary_path(config.store_dir));
        }
    }
    if (want_cnn) {
        auto imported = embed::import_embeddings(config.embeddings, manifest);
        for (const auto& id : imported.missing_ids)
            if (log) *log << "no embedding for " << id << '\n';
        result.matrices.emplace(FeatureFamily::CNN, std::move(imported.matrix));
    }
    if (log)
        *log << "processed " << result.processed << " of " << records.size() << " images, skipped "
             << result.skipped.size() << '\n';
    return result;
}

ExtractResult run_extract(const PipelineConfig& config, std::ostream* log) {
    if (config.manifest.empty()) throw UsageError("no manifest given");
    const auto manifest = load_manifest(config.manifest);
    auto result = extract_features(config, manifest, log);
    fs::create_directories(config.store_dir);
    for (const auto& [family, matrix] : result.matrices) write_feature_store(matrix, store_path(config.store_dir, family));
    return result;
}

std::vector<std::unique_ptr<classify::FeatureSource>> load_sources(const PipelineConfig& config,
                                                                   const DatasetManifest& manifest, bool phow_refit,
                                                                   std::ostream* log) {
    std::vector<std::unique_ptr<classify::FeatureSource>> out;
    for (auto family : config.families) {
        if (family == FeatureFamily::PHOW && phow_refit) {
            std::map<std::string, image::RealPlane> planes;
            for (const auto& r : manifest.records()) {
                try {
                    planes.emplace(r.subject_id, phow_plane(image::read_image(r.image_path)));
                } catch (const DataError& e) {
                    if (log) *log << "skip " << r.subject_id << ": " << e.what() << '\n';
                }
            }
            out.push_back(std::make_unique<classify::PhowSource>(std::move(planes), phow::PhowConfig{},
                                                                 config.phow_sample));
            continue;
        }
        const auto path = store_path(config.store_dir, family);
        if (!fs::exists(path))
            throw DataError("missing " + std::string(family_name(family)) + " feature store " + path.string() +
                            " (run extract first)");
        auto matrix = read_feature_store(path);
        if (matrix.family() != family)
            throw DataError(path.string() + " holds " + std::string(family_name(matrix.family())) + " features");
        out.push_back(std::make_unique<classify::StaticSource>(std::move(matrix)));
    }
    return out;
}

}  // namespace persona::pipeline
