#include "spotrank/scoring.hpp"

#include <array>
#include <cmath>

#include "spotrank/format.hpp"

namespace spotrank {

namespace {

constexpr std::array<std::pair<std::string_view, SiKind>, 6> kKindNames{{
    {"whole", SiKind::Whole},
    {"net", SiKind::Net},
    {"positive", SiKind::Positive},
    {"negative", SiKind::Negative},
    {"upvote", SiKind::UpVote},
    {"downvote", SiKind::DownVote},
}};

constexpr std::array<std::pair<std::string_view, SiTransform::Kind>, 4> kTransformNames{{
    {"linear", SiTransform::Kind::Linear},
    {"log", SiTransform::Kind::Logarithmic},
    {"exp", SiTransform::Kind::Exponential},
    {"poly", SiTransform::Kind::Polynomial},
}};

constexpr std::array<std::pair<std::string_view, Scorer::Kind>, 3> kScorerNames{{
    {"wilson", Scorer::Kind::OriginalWilson},
    {"average", Scorer::Kind::AverageRating},
    {"improved", Scorer::Kind::Improved},
}};

template <typename Table, typename Value>
std::string_view name_of(const Table& table, Value v) {
    for (const auto& [name, value] : table)
        if (value == v) return name;
    return "?";
}

template <typename Table>
auto value_of(const Table& table, std::string_view name)
    -> std::optional<typename Table::value_type::second_type> {
    for (const auto& [n, value] : table)
        if (n == name) return value;
    return std::nullopt;
}

}  // namespace

std::string_view to_string(SiKind kind) { return name_of(kKindNames, kind); }
std::string_view to_string(SiTransform::Kind kind) { return name_of(kTransformNames, kind); }
std::string_view to_string(Bound bound) { return bound == Bound::Lower ? "lower" : "upper"; }
std::string_view to_string(Scorer::Kind kind) { return name_of(kScorerNames, kind); }

std::optional<SiKind> parse_si_kind(std::string_view name) { return value_of(kKindNames, name); }
std::optional<SiTransform::Kind> parse_transform_kind(std::string_view name) {
    return value_of(kTransformNames, name);
}
std::optional<Bound> parse_bound(std::string_view name) {
    if (name == "lower") return Bound::Lower;
    if (name == "upper") return Bound::Upper;
    return std::nullopt;
}
std::optional<Scorer::Kind> parse_scorer_kind(std::string_view name) {
    return value_of(kScorerNames, name);
}

std::string label(const Scorer& scorer) {
    const auto& c = scorer.config;
    std::string bound = c.bound == Bound::Upper ? ",upper" : "";
    switch (scorer.kind) {
        case Scorer::Kind::AverageRating: return "average";
        case Scorer::Kind::OriginalWilson: return "wilson(z=" + format_short(c.z) + bound + ")";
        case Scorer::Kind::Improved: {
            std::string transform{to_string(c.si_transform.kind)};
            if (c.si_transform.kind == SiTransform::Kind::Polynomial)
                transform += format_short(c.si_transform.exponent);
            return "improved(z=" + format_short(c.z) + ",p=" + format_short(c.p_weight) + "," +
                   std::string(to_string(c.si_kind)) + "," + transform + bound + ")";
        }
    }
    return "?";
}

ScoringConfig validate_config(const ScoringConfig& config) {
    using Code = ConfigError::Code;
    if (!(config.p_weight >= 0.0 && config.p_weight <= 1.0))
        throw ConfigError(Code::OutOfRangeP, "p-weight",
                          "must lie in [0, 1], got " + format_short(config.p_weight));
    if (!(config.z >= 0.0) || !std::isfinite(config.z))
        throw ConfigError(Code::NegativeZ, "z",
                          "must be a finite non-negative number, got " + format_short(config.z));
    if (config.si_transform.kind == SiTransform::Kind::Polynomial &&
        !(config.si_transform.exponent > 0.0 && std::isfinite(config.si_transform.exponent)))
        throw ConfigError(Code::NonPositiveExponent, "poly-a",
                          "must be positive, got " + format_short(config.si_transform.exponent));
    if (config.n_max_floor < 1)
        throw ConfigError(Code::NonPositiveFloor, "n-max-floor", "must be at least 1");
    return config;
}

}  // namespace spotrank
