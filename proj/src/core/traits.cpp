#include "persona/core/traits.hpp"

#include <cctype>

namespace persona {

std::string_view trait_name(Trait t) noexcept {
    switch (t) {
        case Trait::Openness: return "Openness";
        case Trait::Conscientiousness: return "Conscientiousness";
        case Trait::Extraversion: return "Extraversion";
        case Trait::Agreeableness: return "Agreeableness";
        case Trait::Neuroticism: return "Neuroticism";
    }
    return "?";
}

std::optional<Trait> parse_trait(std::string_view s) noexcept {
    if (s.size() == 1) {
        const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
        for (auto t : kAllTraits)
            if (trait_code(t) == c) return t;
        return std::nullopt;
    }
    for (auto t : kAllTraits) {
        const auto name = trait_name(t);
        if (name.size() != s.size()) continue;
        bool same = true;
        for (std::size_t i = 0; i < s.size() && same; ++i)
            same = std::tolower(static_cast<unsigned char>(s[i])) ==
                   std::tolower(static_cast<unsigned char>(name[i]));
        if (same) return t;
    }
    return std::nullopt;
}

}  // namespace persona
