#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace persona {

/// Big Five personality traits, in OCEAN order.
enum class Trait { Openness = 0, Conscientiousness, Extraversion, Agreeableness, Neuroticism };

inline constexpr std::array<Trait, 5> kAllTraits{Trait::Openness, Trait::Conscientiousness,
                                                 Trait::Extraversion, Trait::Agreeableness,
                                                 Trait::Neuroticism};

constexpr std::size_t index_of(Trait t) noexcept { return static_cast<std::size_t>(t); }

/// One-letter code used in manifests and on the command line ("O".."N").
constexpr char trait_code(Trait t) noexcept { return "OCEAN"[index_of(t)]; }

std::string_view trait_name(Trait t) noexcept;
std::optional<Trait> parse_trait(std::string_view s) noexcept;

/// Self-assessed trait scores on whatever finite scale the questionnaire used.
struct TraitScores {
    std::array<double, 5> values{};

    double operator[](Trait t) const noexcept { return values[index_of(t)]; }
    double& operator[](Trait t) noexcept { return values[index_of(t)]; }
    bool operator==(const TraitScores&) const = default;
};

}  // namespace persona
