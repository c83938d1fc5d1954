#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace persona {

enum class FeatureFamily { CA = 0, PHOW = 1, CNN = 2, IATO = 3 };

inline constexpr std::size_t kCaDim = 82;
inline constexpr std::size_t kPhowDim = 960;
inline constexpr std::size_t kCnnDim = 4096;
inline constexpr std::size_t kIatoDim = 280;

constexpr std::size_t family_dim(FeatureFamily f) noexcept {
    switch (f) {
        case FeatureFamily::CA: return kCaDim;
        case FeatureFamily::PHOW: return kPhowDim;
        case FeatureFamily::CNN: return kCnnDim;
        case FeatureFamily::IATO: return kIatoDim;
    }
    return 0;
}

std::string_view family_name(FeatureFamily f) noexcept;  // "CA", "PHOW", ...
std::optional<FeatureFamily> parse_family(std::string_view s) noexcept;  // case-insensitive

/// Rows of equal-length real vectors keyed by subject id, in insertion order.
class FeatureMatrix {
public:
    FeatureMatrix(FeatureFamily family);

    FeatureFamily family() const noexcept { return family_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t rows() const noexcept { return ids_.size(); }
    bool empty() const noexcept { return ids_.empty(); }

    /// Throws DataError on a wrong-length or non-finite row or a duplicate id.
    void add_row(std::string id, std::span<const double> values);

    std::span<const double> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
    std::span<const double> row(std::string_view id) const;
    std::size_t find(std::string_view id) const;
    bool contains(std::string_view id) const { return find(id) != npos; }

    const std::vector<std::string>& ids() const noexcept { return ids_; }
    const std::vector<double>& data() const noexcept { return data_; }

    /// Column j over the given subjects, in the given order.
    std::vector<double> column(std::size_t j, std::span<const std::string> subject_ids) const;

    bool operator==(const FeatureMatrix& other) const;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    FeatureFamily family_;
    std::size_t dim_;
    std::vector<std::string> ids_;
    std::vector<double> data_;
    std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace persona
