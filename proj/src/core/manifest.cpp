#include "persona/core/manifest.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "persona/util/text.hpp"

namespace persona {

DatasetManifest::DatasetManifest(std::vector<ImageRecord> records, std::string source_note)
    : records_(std::move(records)), source_note_(std::move(source_note)) {
    if (records_.empty()) throw DataError("manifest has no records");
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const auto& r = records_[i];
        if (r.subject_id.empty()) throw DataError("manifest record " + std::to_string(i) + " has an empty subject_id");
        if (!index_.emplace(r.subject_id, i).second)
            throw DataError("duplicate subject_id '" + r.subject_id + "'");
        for (double v : r.traits.values)
            if (!std::isfinite(v)) throw DataError("non-finite trait score for '" + r.subject_id + "'");
    }
}

std::size_t DatasetManifest::find(std::string_view id) const {
    const auto it = index_.find(std::string(id));
    return it == index_.end() ? npos : it->second;
}

const ImageRecord& DatasetManifest::at(std::string_view id) const {
    const auto i = find(id);
    if (i == npos) throw DataError("unknown subject_id '" + std::string(id) + "'");
    return records_[i];
}

std::vector<std::string> DatasetManifest::ids() const {
    std::vector<std::string> out;
    out.reserve(records_.size());
    for (const auto& r : records_) out.push_back(r.subject_id);
    return out;
}

std::vector<double> DatasetManifest::scores(Trait t) const {
    std::vector<double> out;
    out.reserve(records_.size());
    for (const auto& r : records_) out.push_back(r.traits[t]);
    return out;
}

DatasetManifest parse_manifest(std::string_view text, std::string source_note) {
    if (text.size() >= 3 && static_cast<unsigned char>(text[0]) == 0xEF &&
        static_cast<unsigned char>(text[1]) == 0xBB && static_cast<unsigned char>(text[2]) == 0xBF)
        text.remove_prefix(3);

    const auto lines = util::split_lines(text);
    std::vector<ImageRecord> records;
    std::unordered_map<std::string, std::size_t> first_seen;
    bool header_seen = false;
    static constexpr std::string_view kTraitColumns[] = {"O", "C", "E", "A", "N"};

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        const auto line = util::trim(lines[i]);
        if (line.empty()) continue;
        if (line.front() == '#') {
            if (!header_seen && line.starts_with("# persona-manifest") && line != kManifestVersionLine)
                throw ManifestError(lineno, "unsupported manifest version '" + std::string(line) + "'");
            continue;
        }
        if (!header_seen) {
            if (line != kManifestHeader)
                throw ManifestError(lineno, "expected header '" + std::string(kManifestHeader) + "'");
            header_seen = true;
            continue;
        }
        const auto fields = util::split_csv(line);
        if (fields.size() < 7) {
            const auto missing = fields.size() < 2 ? std::string("image_path")
                                                   : std::string(kTraitColumns[fields.size() - 2]);
            throw ManifestError(lineno, "missing column '" + missing + "'");
        }
        if (fields.size() > 7) throw ManifestError(lineno, "expected 7 columns, found " + std::to_string(fields.size()));

        ImageRecord rec;
        rec.subject_id = std::string(util::trim(fields[0]));
        rec.image_path = std::string(util::trim(fields[1]));
        if (rec.subject_id.empty()) throw ManifestError(lineno, "empty subject_id");
        if (rec.image_path.empty()) throw ManifestError(lineno, "empty image_path");
        for (std::size_t t = 0; t < 5; ++t) {
            const auto v = util::parse_double(fields[2 + t]);
            if (!v)
                throw ManifestError(lineno, "column '" + std::string(kTraitColumns[t]) + "': cannot parse '" +
                                                std::string(fields[2 + t]) + "' as a finite number");
            rec.traits.values[t] = *v;
        }
        if (const auto [it, inserted] = first_seen.emplace(rec.subject_id, lineno); !inserted)
            throw ManifestError(lineno, "duplicate subject_id '" + rec.subject_id + "' (first seen on line " +
                                            std::to_string(it->second) + ")");
        records.push_back(std::move(rec));
    }
    if (!header_seen) throw ManifestError(lines.size() + 1, "missing header");
    if (records.empty()) throw ManifestError(lines.size() + 1, "manifest has no records");
    return DatasetManifest(std::move(records), std::move(source_note));
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
    auto parsed = parse_manifest(util::read_file(path.string()), path.string());
    const auto base = path.parent_path();
    std::vector<ImageRecord> records = parsed.records();
    for (auto& r : records) {
        std::filesystem::path p(r.image_path);
        if (p.is_relative()) r.image_path = (base / p).lexically_normal().string();
    }
    return DatasetManifest(std::move(records), parsed.source_note());
}

std::string format_manifest(const DatasetManifest& manifest) {
    std::ostringstream out;
    out << kManifestVersionLine << '\n' << kManifestHeader << '\n';
    for (const auto& r : manifest.records()) {
        out << r.subject_id << ',' << r.image_path;
        for (double v : r.traits.values) out << ',' << util::format_double(v);
        out << '\n';
    }
    return std::move(out).str();
}

void validate_images(const DatasetManifest& manifest) {
    for (const auto& r : manifest.records()) {
        std::ifstream in(r.image_path, std::ios::binary);
        if (!in) throw DataError("image for '" + r.subject_id + "' not found: " + r.image_path);
        unsigned char soi[2] = {0, 0};
        in.read(reinterpret_cast<char*>(soi), 2);
        if (in.gcount() != 2 || soi[0] != 0xFF || soi[1] != 0xD8)
            throw DataError("image for '" + r.subject_id + "' is not a JPEG (missing FF D8): " + r.image_path);
    }
}

}  // namespace persona
