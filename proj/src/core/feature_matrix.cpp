#include "persona/core/feature_matrix.hpp"

#include <cctype>
#include <cmath>
#include <cstring>

#include "persona/error.hpp"

namespace persona {

std::string_view family_name(FeatureFamily f) noexcept {
    switch (f) {
        case FeatureFamily::CA: return "CA";
        case FeatureFamily::PHOW: return "PHOW";
        case FeatureFamily::CNN: return "CNN";
        case FeatureFamily::IATO: return "IATO";
    }
    return "?";
}

std::optional<FeatureFamily> parse_family(std::string_view s) noexcept {
    std::string up(s);
    for (auto& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    for (auto f : {FeatureFamily::CA, FeatureFamily::PHOW, FeatureFamily::CNN, FeatureFamily::IATO})
        if (family_name(f) == up) return f;
    return std::nullopt;
}

FeatureMatrix::FeatureMatrix(FeatureFamily family) : family_(family), dim_(family_dim(family)) {}

void FeatureMatrix::add_row(std::string id, std::span<const double> values) {
    if (values.size() != dim_)
        throw DataError(std::string(family_name(family_)) + " row '" + id + "' has " +
                        std::to_string(values.size()) + " entries, expected " + std::to_string(dim_));
    for (std::size_t j = 0; j < values.size(); ++j)
        if (!std::isfinite(values[j]))
            throw DataError("non-finite value in row '" + id + "' at column " + std::to_string(j));
    if (!index_.emplace(id, ids_.size()).second) throw DataError("duplicate row id '" + id + "'");
    ids_.push_back(std::move(id));
    data_.insert(data_.end(), values.begin(), values.end());
}

std::size_t FeatureMatrix::find(std::string_view id) const {
    const auto it = index_.find(std::string(id));
    return it == index_.end() ? npos : it->second;
}

std::span<const double> FeatureMatrix::row(std::string_view id) const {
    const auto i = find(id);
    if (i == npos) throw DataError(std::string(family_name(family_)) + " matrix has no row '" + std::string(id) + "'");
    return row(i);
}

std::vector<double> FeatureMatrix::column(std::size_t j, std::span<const std::string> subject_ids) const {
    std::vector<double> out;
    out.reserve(subject_ids.size());
    for (const auto& id : subject_ids) out.push_back(row(id)[j]);
    return out;
}

bool FeatureMatrix::operator==(const FeatureMatrix& other) const {
    if (family_ != other.family_ || ids_ != other.ids_ || data_.size() != other.data_.size()) return false;
    // Bitwise, so -0.0 and 0.0 are distinguished.
    return data_.empty() || std::memcmp(data_.data(), other.data_.data(), data_.size() * sizeof(double)) == 0;
}

}  // namespace persona
