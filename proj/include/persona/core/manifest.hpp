#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "persona/core/traits.hpp"
#include "persona/error.hpp"

namespace persona {

struct ImageRecord {
    std::string subject_id;
    std::string image_path;
    TraitScores traits;

    bool operator==(const ImageRecord&) const = default;
};

/// Ordered, id-unique list of subjects. Immutable once parsed.
class DatasetManifest {
public:
    DatasetManifest(std::vector<ImageRecord> records, std::string source_note);

    const std::vector<ImageRecord>& records() const noexcept { return records_; }
    const std::string& source_note() const noexcept { return source_note_; }
    std::size_t size() const noexcept { return records_.size(); }

    /// Index of a subject, or npos when absent.
    std::size_t find(std::string_view id) const;
    const ImageRecord& at(std::string_view id) const;
    bool contains(std::string_view id) const { return find(id) != npos; }

    std::vector<std::string> ids() const;
    /// Trait scores keyed by subject, in manifest order.
    std::vector<double> scores(Trait t) const;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::vector<ImageRecord> records_;
    std::string source_note_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Manifest rejection carrying the 1-based line it refers to.
class ManifestError : public DataError {
public:
    ManifestError(std::size_t line, const std::string& reason)
        : DataError("manifest line " + std::to_string(line) + ": " + reason), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

inline constexpr std::string_view kManifestHeader = "subject_id,image_path,O,C,E,A,N";
inline constexpr std::string_view kManifestVersionLine = "# persona-manifest v1";

/// Parses the CSV manifest. An optional leading "# persona-manifest v1" line
/// versions the format; other '#' lines and blank lines are ignored.
DatasetManifest parse_manifest(std::string_view text, std::string source_note = {});

/// Reads a manifest file; relative image paths are resolved against the
/// manifest's directory.
DatasetManifest load_manifest(const std::filesystem::path& path);

std::string format_manifest(const DatasetManifest& manifest);

/// Checks that every image exists and starts with the JPEG SOI marker.
void validate_images(const DatasetManifest& manifest);

}  // namespace persona
