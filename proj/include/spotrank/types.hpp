#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace spotrank {

using Count = std::uint64_t;

/// Up/down vote counts for one answer.
struct VoteTally {
    Count up = 0;
    Count down = 0;

    constexpr Count total() const noexcept { return up + down; }
    /// Signed u - d.
    constexpr std::int64_t net() const noexcept {
        return static_cast<std::int64_t>(up) - static_cast<std::int64_t>(down);
    }

    friend constexpr bool operator==(const VoteTally&, const VoteTally&) = default;
};

/// Per-question maxima after the floor convention (every component >= 1).
struct Maxima {
    Count n_max = 1;
    Count u_max = 1;
    Count d_max = 1;

    friend constexpr bool operator==(const Maxima&, const Maxima&) = default;
};

enum class SiKind { Whole, Net, Positive, Negative, UpVote, DownVote };

struct SiTransform {
    enum class Kind { Linear, Logarithmic, Exponential, Polynomial };

    Kind kind = Kind::Linear;
    double exponent = 1.0;  // Polynomial only

    static constexpr SiTransform linear() { return {Kind::Linear, 1.0}; }
    static constexpr SiTransform logarithmic() { return {Kind::Logarithmic, 1.0}; }
    static constexpr SiTransform exponential() { return {Kind::Exponential, 1.0}; }
    static constexpr SiTransform polynomial(double a) { return {Kind::Polynomial, a}; }

    friend constexpr bool operator==(const SiTransform&, const SiTransform&) = default;
};

enum class Bound { Lower, Upper };

/// Denominator used by the linear Whole index.
enum class SiDenominator { NMax, NMaxPlusOne, NPlusOneOverNMaxPlusOne };

struct ScoringConfig {
    double z = 2.0;
    double p_weight = 0.5;
    SiKind si_kind = SiKind::Whole;
    SiTransform si_transform = SiTransform::linear();
    Bound bound = Bound::Lower;
    Count n_max_floor = 1;
    SiDenominator si_denominator = SiDenominator::NMax;

    friend constexpr bool operator==(const ScoringConfig&, const ScoringConfig&) = default;
};

template <typename Scalar = double>
struct WilsonInterval {
    Scalar lower{};
    Scalar upper{};
};

template <typename Scalar = double>
struct ScoreBreakdown {
    WilsonInterval<Scalar> wilson;
    Scalar wilson_used{};
    Scalar si{};
    Scalar combined{};
};

/// What produces a score: the plain Wilson bound, the average-rating baseline,
/// or the blended Wilson + spotlight score.
struct Scorer {
    enum class Kind { OriginalWilson, AverageRating, Improved };

    Kind kind = Kind::Improved;
    ScoringConfig config;  // OriginalWilson reads z and bound only

    static Scorer original_wilson(double z, Bound bound = Bound::Lower) {
        Scorer s{Kind::OriginalWilson, {}};
        s.config.z = z;
        s.config.bound = bound;
        return s;
    }
    static Scorer average_rating() { return {Kind::AverageRating, {}}; }
    static Scorer improved(const ScoringConfig& config) { return {Kind::Improved, config}; }

    friend bool operator==(const Scorer&, const Scorer&) = default;
};

class ConfigError : public std::invalid_argument {
public:
    enum class Code { OutOfRangeP, NegativeZ, NonPositiveExponent, NonPositiveFloor };

    ConfigError(Code code, std::string field, const std::string& message)
        : std::invalid_argument(field + ": " + message), code_(code), field_(std::move(field)) {}

    Code code() const noexcept { return code_; }
    /// Offending field, spelled as its command-line flag.
    const std::string& field() const noexcept { return field_; }

private:
    Code code_;
    std::string field_;
};

std::string_view to_string(SiKind kind);
std::string_view to_string(SiTransform::Kind kind);
std::string_view to_string(Bound bound);
std::string_view to_string(Scorer::Kind kind);

std::optional<SiKind> parse_si_kind(std::string_view name);
std::optional<SiTransform::Kind> parse_transform_kind(std::string_view name);
std::optional<Bound> parse_bound(std::string_view name);
std::optional<Scorer::Kind> parse_scorer_kind(std::string_view name);

/// Stable, human-readable scorer description, e.g. "improved(z=2,p=0.5,whole,linear)".
std::string label(const Scorer& scorer);

}  // namespace spotrank
