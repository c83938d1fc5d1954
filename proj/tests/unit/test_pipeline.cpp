#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>

#include "persona/ca/hsv.hpp"
#include "persona/core/feature_store.hpp"
#include "persona/pipeline/commands.hpp"
#include "persona/pipeline/config.hpp"
#include "persona/pipeline/extract.hpp"
#include "persona/pipeline/synthetic.hpp"
#include "persona/stats/correlation.hpp"
#include "persona/util/text.hpp"
#include "support.hpp"

using namespace persona;
using namespace persona::pipeline;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(PERSONA_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) { return util::read_file(p.string()); }

}  // namespace

TEST(Config, DefaultsParseAndOverrides) {
    const PipelineConfig d;
    EXPECT_EQ(d.split, stats::SplitMode::Quartile);
    EXPECT_EQ(d.seed, 1u);
    EXPECT_EQ(d.traits.size(), 5u);

    const auto c = parse_config("# comment\nmanifest = data/m.csv\nfamilies = ca, iato\nsplit = mean\n"
                                "traits = E,N  # trailing\nseed = 42\nworkers = 3\nphow_sample = 500\n");
    EXPECT_EQ(c.manifest, std::filesystem::path("data/m.csv"));
    EXPECT_EQ(c.families, (std::vector<FeatureFamily>{FeatureFamily::CA, FeatureFamily::IATO}));
    EXPECT_EQ(c.split, stats::SplitMode::Mean);
    EXPECT_EQ(c.traits, (std::vector<Trait>{Trait::Extraversion, Trait::Neuroticism}));
    EXPECT_EQ(c.seed, 42u);
    EXPECT_EQ(effective_workers(c), 3u);
    EXPECT_EQ(c.phow_sample, 500u);

    auto o = c;
    apply_setting(o, "seed", "7");
    EXPECT_EQ(o.seed, 7u);
    EXPECT_EQ(parse_trait_list("all").size(), 5u);
    EXPECT_GE(effective_workers(PipelineConfig{}), 1u);
}

TEST(Config, Rejections) {
    EXPECT_THROW(parse_config("bogus = 1\n"), UsageError);
    EXPECT_THROW(parse_config("seed 1\n"), UsageError);
    EXPECT_THROW(parse_config("split = tertile\n"), UsageError);
    EXPECT_THROW(parse_family_list("ca,xyz"), UsageError);
    EXPECT_THROW(parse_trait_list("Q"), UsageError);
    try {
        parse_config("seed = 1\n\nfamilies = nope\n");
        FAIL();
    } catch (const UsageError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
}

TEST(Synthetic, SignalSpec) {
    const auto s = parse_signal_spec("E:warmth=0.95,N:texture=-0.5");
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].trait, Trait::Extraversion);
    EXPECT_EQ(s[0].param, 0u);
    EXPECT_DOUBLE_EQ(s[1].weight, -0.5);
    EXPECT_TRUE(parse_signal_spec("none").empty());
    EXPECT_TRUE(parse_signal_spec("").empty());
    EXPECT_THROW(parse_signal_spec("E:warmth"), UsageError);
    EXPECT_THROW(parse_signal_spec("E:glow=0.5"), UsageError);
    EXPECT_THROW(parse_signal_spec("E:warmth=1.5"), UsageError);
    EXPECT_THROW(parse_signal_spec("E:warmth=0.5,N:warmth=0.5"), UsageError);
    EXPECT_EQ(synthetic_quality(0.0), 35);
    EXPECT_EQ(synthetic_quality(1.0), 95);
}

TEST(Synthetic, SameSeedSameBytes) {
    testkit::TempDir a("syn_a"), b("syn_b");
    const auto ma = generate_synthetic_corpus(a.path(), 10, 5);
    generate_synthetic_corpus(b.path(), 10, 5);
    EXPECT_EQ(ma.size(), 10u);
    EXPECT_EQ(slurp(a / "manifest.csv"), slurp(b / "manifest.csv"));
    for (const auto& r : ma.records()) {
        const auto name = std::filesystem::path(r.image_path).filename().string();
        EXPECT_EQ(slurp(a / "images" / name), slurp(b / "images" / name)) << name;
    }
    for (const auto& r : ma.records())
        for (double v : r.traits.values) {
            EXPECT_GE(v, 1.0);
            EXPECT_LE(v, 5.0);
        }
    EXPECT_THROW(generate_synthetic_corpus(a / "x", 7, 1), UsageError);
}

TEST(Synthetic, WarmthTracksExtraversion) {
    testkit::TempDir dir("syn_warm");
    SyntheticOptions opt;
    opt.width = opt.height = 32;
    opt.signal = parse_signal_spec("E:warmth=0.95");
    const auto m = generate_synthetic_corpus(dir.path(), 500, 3, opt);
    std::vector<double> warm, e;
    for (const auto& r : m.records()) {
        const auto img = image::read_image(r.image_path);
        double rb = 0;
        for (const auto p : img.pixels()) rb += static_cast<double>(p.r) - static_cast<double>(p.b);
        warm.push_back(rb / static_cast<double>(img.size()));
        e.push_back(r.traits[Trait::Extraversion]);
    }
    EXPECT_GT(stats::spearman(warm, e).rho, 0.3);
}

TEST(Synthetic, RatingsFollowTruth) {
    std::vector<std::string> ids{"a", "b", "c", "d", "e", "f"};
    const std::vector<double> scores{1, 2, 3, 4, 5, 6};
    const auto truth = stats::binarize(ids, scores, stats::SplitMode::Mean, Trait::Openness);
    const auto m = synthetic_ratings(truth, 3, 0.0, 0.0, 1);
    EXPECT_EQ(m.raters, (std::vector<std::string>{"r01", "r02", "r03"}));
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t i = 0; i < ids.size(); ++i) {
            ASSERT_TRUE(m.at(r, i).has_value());
            const int s = *m.at(r, i);
            EXPECT_EQ(s >= 4, truth.labels[i] == 1);
            EXPECT_NE(s, 3);
        }
}

TEST(Extract, TwoFamiliesAndSkippedImages) {
    testkit::TempDir dir("extract");
    const auto manifest = generate_synthetic_corpus(dir / "corpus", 10, 2);
    PipelineConfig cfg;
    cfg.manifest = dir / "corpus" / "manifest.csv";
    cfg.store_dir = dir / "stores";
    cfg.families = {FeatureFamily::CA, FeatureFamily::IATO};
    cfg.workers = 2;
    const auto res = run_extract(cfg);
    EXPECT_EQ(res.matrices.size(), 2u);
    const auto ca = read_feature_store(store_path(cfg.store_dir, FeatureFamily::CA));
    const auto iato = read_feature_store(store_path(cfg.store_dir, FeatureFamily::IATO));
    EXPECT_EQ(ca.rows(), 10u);
    EXPECT_EQ(ca.dim(), kCaDim);
    EXPECT_EQ(iato.rows(), 10u);
    EXPECT_EQ(iato.dim(), kIatoDim);
    EXPECT_FALSE(std::filesystem::exists(store_path(cfg.store_dir, FeatureFamily::PHOW)));

    {
        std::ofstream broken(manifest.records()[3].image_path, std::ios::binary | std::ios::trunc);
        broken << "not a jpeg";
    }
    const auto again = extract_features(cfg, load_manifest(cfg.manifest));
    ASSERT_EQ(again.skipped.size(), 1u);
    EXPECT_EQ(again.skipped[0].id, manifest.records()[3].subject_id);
    EXPECT_EQ(again.matrices.at(FeatureFamily::CA).rows(), 9u);
    EXPECT_EQ(again.matrices.at(FeatureFamily::IATO).rows(), 9u);
    EXPECT_FALSE(again.matrices.at(FeatureFamily::CA).contains(manifest.records()[3].subject_id));
}

TEST(Extract, PhowVocabularyIsStored) {
    testkit::TempDir dir("extract_phow");
    generate_synthetic_corpus(dir / "corpus", 24, 4);
    PipelineConfig cfg;
    cfg.manifest = dir / "corpus" / "manifest.csv";
    cfg.store_dir = dir / "stores";
    cfg.families = {FeatureFamily::PHOW};
    cfg.phow_sample = 1000;
    run_extract(cfg);
    const auto phow = read_feature_store(store_path(cfg.store_dir, FeatureFamily::PHOW));
    EXPECT_EQ(phow.rows(), 24u);
    EXPECT_EQ(phow.dim(), kPhowDim);
    EXPECT_TRUE(std::filesystem::exists(vocabulary_path(cfg.store_dir)));
}

TEST(Extract, CnnNeedsEmbeddings) {
    testkit::TempDir dir("extract_cnn");
    generate_synthetic_corpus(dir / "corpus", 8, 1);
    PipelineConfig cfg;
    cfg.manifest = dir / "corpus" / "manifest.csv";
    cfg.store_dir = dir / "stores";
    cfg.families = {FeatureFamily::CNN};
    EXPECT_THROW(run_extract(cfg), UsageError);
}

TEST(Stages, CorrelateAndEvaluateOutputs) {
    testkit::TempDir dir("stages");
    SyntheticOptions opt;
    opt.width = opt.height = 32;
    opt.signal = parse_signal_spec("E:warmth=0.95,E:quality=0.9");
    generate_synthetic_corpus(dir / "corpus", 80, 6, opt);
    PipelineConfig cfg;
    cfg.manifest = dir / "corpus" / "manifest.csv";
    cfg.store_dir = dir / "stores";
    cfg.output_dir = dir / "out";
    cfg.families = {FeatureFamily::CA, FeatureFamily::IATO};
    cfg.traits = {Trait::Extraversion};
    cfg.split = stats::SplitMode::Mean;
    run_extract(cfg);

    const auto corr = correlate_stage(cfg);
    ASSERT_TRUE(corr.count("correlation_summary.csv"));
    ASSERT_TRUE(corr.count("features.csv"));
    EXPECT_EQ(corr.at("correlation_summary.csv").rfind("family,trait,subjects,mean_abs_rho,count,dim,percent", 0), 0u);
    const auto eval = evaluate_stage(cfg);
    ASSERT_TRUE(eval.count("evaluation.json"));
    ASSERT_TRUE(eval.count("evaluation.csv"));
    EXPECT_EQ(evaluate_stage(cfg), eval);
    write_outputs(cfg.output_dir, eval);
    EXPECT_EQ(slurp(cfg.output_dir / "evaluation.csv"), eval.at("evaluation.csv"));
}

TEST(Cli, ExitCodes) {
    testkit::TempDir dir("cli");
    EXPECT_EQ(run_cli("--help"), 0);
    EXPECT_EQ(run_cli(""), 1);
    EXPECT_EQ(run_cli("evaluate --no-such-flag"), 1);
    EXPECT_EQ(run_cli("generate --out " + (dir / "c").string() + " -n 8 --seed 2"), 0);
    EXPECT_TRUE(std::filesystem::exists(dir / "c" / "manifest.csv"));
    EXPECT_EQ(run_cli("generate --out " + (dir / "d").string() + " -n 8 --signal E:glow=1"), 1);
    EXPECT_EQ(run_cli("extract --manifest " + (dir / "missing.csv").string()), 2);
    EXPECT_EQ(run_cli("extract --manifest " + (dir / "c" / "manifest.csv").string() + " --families cnn --store-dir " +
                      (dir / "s").string()),
              1);
    EXPECT_EQ(run_cli("iato " + (dir / "c" / "images" / "s00001.jpg").string()), 0);
    EXPECT_EQ(run_cli("iato " + (dir / "c" / "manifest.csv").string()), 2);
}
