// persona: image features, trait correlation, classification and rater agreement.
#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "persona/ca/ca.hpp"
#include "persona/core/feature_store.hpp"
#include "persona/embed/embedding_import.hpp"
#include "persona/error.hpp"
#include "persona/iato/jpeg_scan.hpp"
#include "persona/pipeline/commands.hpp"
#include "persona/pipeline/extract.hpp"
#include "persona/pipeline/report.hpp"
#include "persona/pipeline/synthetic.hpp"
#include "persona/util/rng.hpp"
#include "persona/util/text.hpp"

using namespace persona;
namespace fs = std::filesystem;

namespace {

// Flags that override the config file, by config key.
struct Overrides {
    std::optional<std::string> config;
    std::map<std::string, std::string> values;

    void attach(CLI::App* app, std::initializer_list<std::string> keys) {
        app->add_option("--config", config, "flat key=value configuration file");
        for (const auto& key : keys) {
            std::string flag = "--" + key;
            std::replace(flag.begin(), flag.end(), '_', '-');
            app->add_option_function<std::string>(flag, [this, key](const std::string& v) { values[key] = v; },
                                                  "overrides '" + key + "' from the config");
        }
    }

    pipeline::PipelineConfig build() const {
        pipeline::PipelineConfig c;
        if (config) c = pipeline::load_config(*config, c);
        for (const auto& [k, v] : values) pipeline::apply_setting(c, k, v);
        return c;
    }
};

std::span<const std::uint8_t> as_bytes(const std::string& s) {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

void emit(const pipeline::PipelineConfig& c, const pipeline::StageOutputs& out) {
    pipeline::write_outputs(c.output_dir, out);
    for (const auto& [name, _] : out) std::cout << (c.output_dir / name).string() << '\n';
}

agreement::Metric metric_of(const std::string& s) {
    const auto m = agreement::parse_metric(s);
    if (!m) throw UsageError("metric must be nominal, ordinal or interval");
    return *m;
}

Trait trait_of(const std::string& s) {
    const auto t = parse_trait(s);
    if (!t) throw UsageError("unknown trait '" + s + "'");
    return *t;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Personality traits from profile images: features, correlation, classification, rater agreement"};
    app.require_subcommand(1);

    const std::initializer_list<std::string> common{"manifest", "store_dir", "output_dir", "cascade", "colors",
                                                    "embeddings", "vocabulary", "families", "split", "traits",
                                                    "seed", "workers", "phow_sample"};

    // generate
    auto* gen = app.add_subcommand("generate", "write a synthetic corpus (JPEGs + manifest)");
    std::string gen_out;
    std::size_t gen_n = 200;
    std::uint64_t gen_seed = 1;
    std::string gen_signal = "none";
    int gen_w = 64, gen_h = 64;
    std::string rate_trait;
    std::size_t raters = 23, rated_items = 150;
    double flip = 0.4, middle = 0.15;
    gen->add_option("--out", gen_out, "output directory")->required();
    gen->add_option("-n,--count", gen_n, "number of subjects");
    gen->add_option("--seed", gen_seed);
    gen->add_option("--signal", gen_signal, "couplings such as E:warmth=0.95,E:quality=0.9");
    gen->add_option("--width", gen_w);
    gen->add_option("--height", gen_h);
    gen->add_option("--ratings-trait", rate_trait, "also write ratings.csv for this trait");
    gen->add_option("--raters", raters);
    gen->add_option("--rated-items", rated_items);
    gen->add_option("--flip", flip, "probability a synthetic rater flips the true label");
    gen->add_option("--middle", middle, "probability a synthetic rater answers 3");

    // extract
    auto* ext = app.add_subcommand("extract", "extract the configured feature families into stores");
    Overrides ext_o;
    ext_o.attach(ext, common);

    // iato / ca: per-file feature rows on stdout
    auto* iato_cmd = app.add_subcommand("iato", "print the 280 IATO values of JPEG files");
    std::vector<std::string> iato_files;
    bool pattern_count = false, strict = false;
    iato_cmd->add_option("files", iato_files)->required();
    iato_cmd->add_flag("--pattern-count", pattern_count, "count raw FF xx patterns instead of walking segments");
    iato_cmd->add_flag("--strict", strict, "treat structural anomalies as errors");

    auto* ca_cmd = app.add_subcommand("ca", "print the 82 CA values of image files");
    std::vector<std::string> ca_files;
    std::string ca_cascade, ca_colors;
    ca_cmd->add_option("files", ca_files)->required();
    ca_cmd->add_option("--cascade", ca_cascade);
    ca_cmd->add_option("--colors", ca_colors);

    // phow
    auto* phow_cmd = app.add_subcommand("phow", "PHOW vocabulary training and encoding");
    phow_cmd->require_subcommand(1);
    auto* train_vocab = phow_cmd->add_subcommand("train-vocab", "train a 20-word vocabulary on manifest images");
    Overrides tv_o;
    tv_o.attach(train_vocab, common);
    auto* encode = phow_cmd->add_subcommand("encode", "encode manifest images with an existing vocabulary");
    Overrides enc_o;
    enc_o.attach(encode, common);

    // embed-import
    auto* embed_cmd = app.add_subcommand("embed-import", "import precomputed 4096-dim embeddings into a CNN store");
    Overrides emb_o;
    emb_o.attach(embed_cmd, common);

    auto* corr = app.add_subcommand("correlate", "Spearman correlation tables");
    Overrides corr_o;
    corr_o.attach(corr, common);

    auto* eval = app.add_subcommand("evaluate", "balanced 75/25 hold-out evaluation, 10 repetitions");
    Overrides eval_o;
    eval_o.attach(eval, common);
    bool eval_refit = false;
    std::string eval_trait;
    eval->add_option("--trait", eval_trait, "shorthand for --traits with one trait");
    eval->add_flag("--phow-refit", eval_refit, "retrain the PHOW vocabulary on each repetition's training images");

    auto* grid = app.add_subcommand("grid", "hold-out accuracy for every family combination x trait");
    Overrides grid_o;
    grid_o.attach(grid, common);
    bool grid_refit = false;
    grid->add_flag("--phow-refit", grid_refit);

    pipeline::AgreementSettings agree;
    std::string agree_trait = "E", agree_metric = "ordinal";
    bool drop_middle = false;
    auto* agr = app.add_subcommand("agreement", "Krippendorff's alpha with a bootstrap interval");
    Overrides agr_o;
    agr_o.attach(agr, common);
    auto* cmp = app.add_subcommand("compare", "human raters vs the classifier on the rated items");
    Overrides cmp_o;
    cmp_o.attach(cmp, common);
    bool cmp_refit = false;
    for (auto* sub : {agr, cmp}) {
        sub->add_option("--ratings", agree.ratings, "rater_id,item_id,score CSV")->required();
        sub->add_option("--trait", agree_trait);
        sub->add_option("--metric", agree_metric, "nominal, ordinal or interval");
        sub->add_option("--resamples", agree.resamples, "bootstrap resamples");
    }
    cmp->add_flag("--drop-middle", drop_middle, "drop items rated 3 instead of flipping a coin");
    cmp->add_flag("--phow-refit", cmp_refit);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*gen) {
            pipeline::SyntheticOptions o;
            o.width = gen_w;
            o.height = gen_h;
            o.signal = pipeline::parse_signal_spec(gen_signal);
            const auto manifest = pipeline::generate_synthetic_corpus(gen_out, gen_n, gen_seed, o);
            std::cout << (fs::path(gen_out) / "manifest.csv").string() << '\n';
            if (!rate_trait.empty()) {
                const auto labels = stats::binarize(manifest, stats::SplitMode::Quartile, trait_of(rate_trait));
                const auto balanced = classify::balance(labels, util::derive_seed(gen_seed, {util::hash_string("rated")}));
                std::vector<std::string> items(balanced.begin(), balanced.end());
                util::Rng rng(util::derive_seed(gen_seed, {util::hash_string("items")}));
                util::shuffle(items.begin(), items.end(), rng);
                items.resize(std::min(items.size(), rated_items));
                const auto truth = stats::subset(labels, items);
                const auto m = pipeline::synthetic_ratings(truth, raters, flip, middle, gen_seed);
                util::write_file((fs::path(gen_out) / "ratings.csv").string(), agreement::format_ratings(m));
                std::cout << (fs::path(gen_out) / "ratings.csv").string() << '\n';
            }
        } else if (*ext) {
            const auto c = ext_o.build();
            const auto r = pipeline::run_extract(c, &std::cerr);
            for (const auto& [f, m] : r.matrices)
                std::cout << pipeline::store_path(c.store_dir, f).string() << ' ' << m.rows() << " rows\n";
        } else if (*iato_cmd) {
            iato::ScanOptions o;
            o.matching = pattern_count ? iato::MarkerMatching::PatternCount : iato::MarkerMatching::Structural;
            o.lenient = !strict;
            for (const auto& f : iato_files) {
                const auto v = iato::extract_iato(as_bytes(util::read_file(f)), o);
                std::cout << f;
                for (double x : v) std::cout << ',' << util::format_double(x);
                std::cout << '\n';
            }
        } else if (*ca_cmd) {
            const auto colors = ca_colors.empty() ? ca::ColorNameTable::defaults() : ca::ColorNameTable::load(ca_colors);
            ca::CaExtractor ex(ca_cascade.empty() ? ca::default_cascade_path() : fs::path(ca_cascade), colors);
            std::cout << "file";
            for (const auto& n : ca::ca_feature_names()) std::cout << ',' << n;
            std::cout << '\n';
            for (const auto& f : ca_files) {
                const auto v = ex.extract(as_bytes(util::read_file(f)));
                std::cout << f;
                for (double x : v) std::cout << ',' << util::format_double(x);
                std::cout << '\n';
            }
        } else if (*train_vocab || *encode) {
            auto c = (*train_vocab ? tv_o : enc_o).build();
            if (*encode && c.vocabulary.empty()) throw UsageError("phow encode needs --vocabulary");
            if (*train_vocab) c.vocabulary.clear();
            c.families = {FeatureFamily::PHOW};
            const auto r = pipeline::run_extract(c, &std::cerr);
            if (*train_vocab) std::cout << pipeline::vocabulary_path(c.store_dir).string() << '\n';
            std::cout << pipeline::store_path(c.store_dir, FeatureFamily::PHOW).string() << ' '
                      << r.matrices.at(FeatureFamily::PHOW).rows() << " rows\n";
        } else if (*embed_cmd) {
            const auto c = emb_o.build();
            if (c.embeddings.empty()) throw UsageError("embed-import needs --embeddings");
            if (c.manifest.empty()) throw UsageError("no manifest given");
            const auto imported = embed::import_embeddings(c.embeddings, load_manifest(c.manifest));
            for (const auto& id : imported.missing_ids) std::cerr << "no embedding for " << id << '\n';
            fs::create_directories(c.store_dir);
            const auto path = pipeline::store_path(c.store_dir, FeatureFamily::CNN);
            write_feature_store(imported.matrix, path);
            std::cout << path.string() << ' ' << imported.matrix.rows() << " rows\n";
        } else if (*corr) {
            const auto c = corr_o.build();
            emit(c, pipeline::correlate_stage(c));
        } else if (*eval) {
            auto c = eval_o.build();
            if (!eval_trait.empty()) c.traits = {trait_of(eval_trait)};
            emit(c, pipeline::evaluate_stage(c, eval_refit, &std::cerr));
        } else if (*grid) {
            const auto c = grid_o.build();
            emit(c, pipeline::grid_stage(c, grid_refit, &std::cerr));
        } else if (*agr || *cmp) {
            const auto c = (*agr ? agr_o : cmp_o).build();
            agree.trait = trait_of(agree_trait);
            agree.metric = metric_of(agree_metric);
            agree.middle = drop_middle ? agreement::MiddleMode::Drop : agreement::MiddleMode::CoinFlip;
            emit(c, *agr ? pipeline::agreement_stage(c, agree) : pipeline::compare_stage(c, agree, cmp_refit, &std::cerr));
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
