#include "persona/embed/embedding_import.hpp"

#include <cstring>
#include <sstream>

#include "persona/core/feature_store.hpp"
#include "persona/util/text.hpp"

namespace persona::embed {

FeatureMatrix parse_embedding_csv(std::string_view text) {
    FeatureMatrix m(FeatureFamily::CNN);
    std::vector<double> row;
    std::size_t lineno = 0;
    bool header_checked = false;
    for (auto line : util::split_lines(text)) {
        ++lineno;
        line = util::trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto fields = util::split_csv(line);
        if (!header_checked) {
            header_checked = true;
            if (util::trim(fields[0]) == "subject_id") {
                if (fields.size() != kCnnDim + 1)
                    throw DataError("embedding CSV header declares dim " + std::to_string(fields.size() - 1) +
                                    ", expected " + std::to_string(kCnnDim));
                continue;
            }
        }
        if (fields.size() != kCnnDim + 1)
            throw DataError("embedding CSV line " + std::to_string(lineno) + ": dim " + std::to_string(fields.size() - 1) +
                            ", expected " + std::to_string(kCnnDim));
        row.clear();
        for (std::size_t j = 1; j < fields.size(); ++j) {
            const auto v = util::parse_double(fields[j]);
            if (!v)
                throw DataError("embedding CSV line " + std::to_string(lineno) + ", column v" + std::to_string(j - 1) +
                                ": not a finite number");
            row.push_back(*v);
        }
        m.add_row(std::string(util::trim(fields[0])), row);
    }
    if (m.empty()) throw DataError("embedding CSV has no rows");
    return m;
}

std::string format_embedding_csv(const FeatureMatrix& matrix) {
    std::ostringstream out;
    out << "subject_id";
    for (std::size_t j = 0; j < matrix.dim(); ++j) out << ",v" << j;
    out << '\n';
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        out << matrix.ids()[i];
        for (double v : matrix.row(i)) out << ',' << util::format_double(v);
        out << '\n';
    }
    return std::move(out).str();
}

EmbeddingImport import_embeddings_bytes(std::string_view bytes, const DatasetManifest& manifest) {
    FeatureMatrix raw(FeatureFamily::CNN);
    if (bytes.size() >= 8 && std::memcmp(bytes.data(), "PFSTORE", 7) == 0) {
        const auto contents = decode_store(bytes);
        if (contents.tag != StoreTag::CNN)
            throw DataError("embedding store carries family tag " + std::to_string(static_cast<int>(contents.tag)) +
                            ", expected CNN");
        raw = to_matrix(contents);
    } else {
        raw = parse_embedding_csv(bytes);
    }

    for (const auto& id : raw.ids())
        if (!manifest.contains(id)) throw DataError("embedding file contains unknown subject_id '" + id + "'");

    EmbeddingImport out;
    for (const auto& rec : manifest.records()) {
        const auto i = raw.find(rec.subject_id);
        if (i == FeatureMatrix::npos)
            out.missing_ids.push_back(rec.subject_id);
        else
            out.matrix.add_row(rec.subject_id, raw.row(i));
    }
    if (out.matrix.empty()) throw DataError("no embedding rows match the manifest");
    return out;
}

EmbeddingImport import_embeddings(const std::filesystem::path& path, const DatasetManifest& manifest) {
    return import_embeddings_bytes(util::read_file(path.string()), manifest);
}

}  // namespace persona::embed
