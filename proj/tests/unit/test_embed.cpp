#include <gtest/gtest.h>

#include <cstring>

#include "persona/core/feature_store.hpp"
#include "persona/embed/embedding_import.hpp"
#include "support.hpp"

using namespace persona;
using namespace persona::embed;

namespace {

DatasetManifest manifest_of(std::initializer_list<const char*> ids) {
    std::string text(kManifestHeader);
    text += '\n';
    for (auto id : ids) text += std::string(id) + "," + id + ".jpg,3,3,3,3,3\n";
    return parse_manifest(text);
}

FeatureMatrix random_embeddings(std::initializer_list<const char*> ids, std::uint64_t seed) {
    util::Rng rng(seed);
    FeatureMatrix m(FeatureFamily::CNN);
    std::vector<double> row(kCnnDim);
    for (auto id : ids) {
        for (auto& v : row) v = util::normal01(rng) * 1e3;
        m.add_row(id, row);
    }
    return m;
}

std::string csv_row(const std::string& id, std::size_t dim) {
    std::string s = id;
    for (std::size_t j = 0; j < dim; ++j) s += ",0.5";
    return s + "\n";
}

}  // namespace

TEST(Embed, CsvImportInManifestOrder) {
    const auto manifest = manifest_of({"a", "b", "c"});
    const auto m = random_embeddings({"c", "a"}, 1);
    const auto got = import_embeddings_bytes(format_embedding_csv(m), manifest);
    ASSERT_EQ(got.matrix.rows(), 2u);
    EXPECT_EQ(got.matrix.dim(), kCnnDim);
    EXPECT_EQ(got.matrix.ids(), (std::vector<std::string>{"a", "c"}));
    EXPECT_EQ(got.missing_ids, std::vector<std::string>{"b"});
    for (const char* id : {"a", "c"}) {
        const auto want = m.row(id), have = got.matrix.row(id);
        for (std::size_t j = 0; j < kCnnDim; ++j) ASSERT_EQ(want[j], have[j]);
    }
}

TEST(Embed, StoreImportIsBitExact) {
    const auto manifest = manifest_of({"x", "y"});
    const auto m = random_embeddings({"y", "x"}, 2);
    const auto got = import_embeddings_bytes(encode_store(to_contents(m)), manifest);
    EXPECT_EQ(got.matrix.row("x").size(), kCnnDim);
    for (const char* id : {"x", "y"}) {
        const auto want = m.row(id), have = got.matrix.row(id);
        for (std::size_t j = 0; j < kCnnDim; ++j) ASSERT_EQ(std::memcmp(&want[j], &have[j], sizeof(double)), 0);
    }
    EXPECT_EQ(parse_embedding_csv(format_embedding_csv(m)), m);
}

TEST(Embed, WrongDimensionIsRejected) {
    const auto manifest = manifest_of({"a"});
    EXPECT_THROW(import_embeddings_bytes(csv_row("a", kCnnDim - 1), manifest), DataError);
    EXPECT_THROW(import_embeddings_bytes(csv_row("a", kCnnDim + 1), manifest), DataError);
    EXPECT_NO_THROW(import_embeddings_bytes(csv_row("a", kCnnDim), manifest));
}

TEST(Embed, UnknownIdIsNamed) {
    const auto manifest = manifest_of({"a"});
    try {
        import_embeddings_bytes(csv_row("a", kCnnDim) + csv_row("ghost", kCnnDim), manifest);
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("ghost"), std::string::npos);
    }
}

TEST(Embed, NonNumericAndWrongStoreTag) {
    const auto manifest = manifest_of({"a"});
    std::string bad = csv_row("a", kCnnDim);
    bad.replace(bad.find("0.5"), 3, "abc");
    EXPECT_THROW(import_embeddings_bytes(bad, manifest), DataError);

    FeatureMatrix ca(FeatureFamily::CA);
    ca.add_row("a", std::vector<double>(kCaDim, 1.0));
    EXPECT_THROW(import_embeddings_bytes(encode_store(to_contents(ca)), manifest), DataError);
    EXPECT_THROW(import_embeddings_bytes("", manifest), DataError);
}

TEST(Embed, FileImport) {
    testkit::TempDir dir("embed");
    const auto manifest = manifest_of({"a", "b"});
    const auto m = random_embeddings({"a", "b"}, 3);
    write_feature_store(m, dir / "cnn.pfs");
    EXPECT_EQ(import_embeddings(dir / "cnn.pfs", manifest).matrix, m);
    EXPECT_THROW(import_embeddings(dir / "missing.pfs", manifest), DataError);
}
