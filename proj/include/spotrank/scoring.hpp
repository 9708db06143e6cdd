#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "spotrank/types.hpp"

namespace spotrank {

namespace detail {

template <typename Scalar>
constexpr Scalar sign(std::int64_t x) noexcept {
    return x > 0 ? Scalar(1) : (x < 0 ? Scalar(-1) : Scalar(0));
}

template <typename Scalar>
constexpr Scalar as_scalar(Count c) noexcept {
    return static_cast<Scalar>(c);
}

}  // namespace detail

/**
 * Wilson score interval for a binomial proportion.
 *
 *   W = (p + z^2/2n +- z/2n * sqrt(4n p(1-p) + z^2)) / (1 + z^2/n)
 *
 * With no votes the interval is the whole of [0, 1]. The result is clamped so
 * that 0 <= lower <= p <= upper <= 1 survives rounding.
 */
template <typename Scalar = double>
WilsonInterval<Scalar> wilson_interval(const VoteTally& tally, Scalar z) {
    using std::sqrt;
    const Count total = tally.total();
    if (total == 0) return {Scalar(0), Scalar(1)};

    const Scalar n = detail::as_scalar<Scalar>(total);
    const Scalar p = detail::as_scalar<Scalar>(tally.up) / n;
    const Scalar z2 = z * z;
    const Scalar centre = p + z2 / (Scalar(2) * n);
    const Scalar spread = z / (Scalar(2) * n) * sqrt(Scalar(4) * n * (Scalar(1) - p) * p + z2);
    const Scalar denom = Scalar(1) + z2 / n;

    Scalar lower = (centre - spread) / denom;
    Scalar upper = (centre + spread) / denom;
    lower = std::clamp(lower, Scalar(0), p);
    upper = std::clamp(upper, p, Scalar(1));
    return {lower, upper};
}

/// u / n, or 0 for an answer nobody voted on.
template <typename Scalar = double>
Scalar average_rating(const VoteTally& tally) {
    const Count total = tally.total();
    if (total == 0) return Scalar(0);
    return detail::as_scalar<Scalar>(tally.up) / detail::as_scalar<Scalar>(total);
}

/// Replaces each raw maximum below `floor` with `floor`.
/// floor = 1 guards the denominators; larger floors damp early-vote swings.
constexpr Maxima effective_maxima(Count raw_n_max, Count raw_u_max, Count raw_d_max,
                                  Count floor = 1) noexcept {
    floor = std::max<Count>(floor, 1);
    return {std::max(raw_n_max, floor), std::max(raw_u_max, floor), std::max(raw_d_max, floor)};
}

/// Closed range of values spotlight_index can take for a kind; the same for
/// every transform.
template <typename Scalar = double>
constexpr std::pair<Scalar, Scalar> si_range(SiKind kind, SiTransform = {}) noexcept {
    switch (kind) {
        case SiKind::Net: return {Scalar(-1), Scalar(1)};
        case SiKind::Negative:
        case SiKind::DownVote: return {Scalar(-1), Scalar(0)};
        case SiKind::Whole:
        case SiKind::Positive:
        case SiKind::UpVote: break;
    }
    return {Scalar(0), Scalar(1)};
}

/**
 * Spotlight index of one answer relative to the busiest answers of its question.
 *
 * `maxima` must already be floored. Whole/Net/Positive/Negative are normalised
 * by n_max, UpVote by u_max and DownVote by d_max. The Net index uses |u - d|
 * inside the logarithm and power so that u < d stays defined; exponentials are
 * evaluated as exp(x - max) rather than exp(x) / exp(max).
 */
template <typename Scalar = double>
Scalar spotlight_index(const VoteTally& tally, const Maxima& maxima, SiKind kind,
                       SiTransform transform = SiTransform::linear(),
                       SiDenominator denominator = SiDenominator::NMax) {
    using std::abs;
    using std::exp;
    using std::log10;
    using std::pow;
    using detail::as_scalar;

    const Scalar u = as_scalar<Scalar>(tally.up);
    const Scalar d = as_scalar<Scalar>(tally.down);
    const Scalar n = as_scalar<Scalar>(tally.total());
    const std::int64_t net = tally.net();
    const Scalar net_abs = static_cast<Scalar>(net < 0 ? -net : net);
    const Scalar sgn = detail::sign<Scalar>(net);
    const Scalar n_max = as_scalar<Scalar>(maxima.n_max);
    const Scalar u_max = as_scalar<Scalar>(maxima.u_max);
    const Scalar d_max = as_scalar<Scalar>(maxima.d_max);

    switch (transform.kind) {
        case SiTransform::Kind::Linear:
            switch (kind) {
                case SiKind::Whole:
                    switch (denominator) {
                        case SiDenominator::NMax: return n / n_max;
                        case SiDenominator::NMaxPlusOne: return n / (n_max + Scalar(1));
                        case SiDenominator::NPlusOneOverNMaxPlusOne:
                            return (n + Scalar(1)) / (n_max + Scalar(1));
                    }
                    break;
                case SiKind::Net: return static_cast<Scalar>(net) / n_max;
                case SiKind::Positive: return u / n_max;
                case SiKind::Negative: return -(d / n_max);
                case SiKind::UpVote: return u / u_max;
                case SiKind::DownVote: return -(d / d_max);
            }
            break;

        case SiTransform::Kind::Logarithmic: {
            const Scalar log_n_max = log10(n_max + Scalar(1));
            switch (kind) {
                case SiKind::Whole: return log10(n + Scalar(1)) / log_n_max;
                case SiKind::Net: return sgn * (log10(net_abs + Scalar(1)) / log_n_max);
                case SiKind::Positive: return log10(u + Scalar(1)) / log_n_max;
                case SiKind::Negative: return -(log10(d + Scalar(1)) / log_n_max);
                case SiKind::UpVote: return log10(u + Scalar(1)) / log10(u_max + Scalar(1));
                case SiKind::DownVote: return -(log10(d + Scalar(1)) / log10(d_max + Scalar(1)));
            }
            break;
        }

        case SiTransform::Kind::Exponential:
            switch (kind) {
                case SiKind::Whole: return exp(n - n_max);
                case SiKind::Net: return exp(static_cast<Scalar>(net) - n_max);
                case SiKind::Positive: return exp(u - n_max);
                case SiKind::Negative: return -exp(d - n_max);
                case SiKind::UpVote: return exp(u - u_max);
                case SiKind::DownVote: return -exp(d - d_max);
            }
            break;

        case SiTransform::Kind::Polynomial: {
            const Scalar a = static_cast<Scalar>(transform.exponent);
            switch (kind) {
                case SiKind::Whole: return pow(n / n_max, a);
                case SiKind::Net: return sgn * pow(net_abs / n_max, a);
                case SiKind::Positive: return pow(u / n_max, a);
                case SiKind::Negative: return -pow(d / n_max, a);
                case SiKind::UpVote: return pow(u / u_max, a);
                case SiKind::DownVote: return -pow(d / d_max, a);
            }
            break;
        }
    }
    return Scalar(0);
}

/// P * W + (1 - P) * SI, unclamped. `maxima` must already be floored.
template <typename Scalar = double>
ScoreBreakdown<Scalar> combined_score(const VoteTally& tally, const Maxima& maxima,
                                      const ScoringConfig& config) {
    ScoreBreakdown<Scalar> out;
    out.wilson = wilson_interval<Scalar>(tally, static_cast<Scalar>(config.z));
    out.wilson_used = config.bound == Bound::Lower ? out.wilson.lower : out.wilson.upper;
    out.si = spotlight_index<Scalar>(tally, maxima, config.si_kind, config.si_transform,
                                     config.si_denominator);
    const auto p = static_cast<Scalar>(config.p_weight);
    out.combined = p * out.wilson_used + (Scalar(1) - p) * out.si;
    return out;
}

/// Scores a tally under any scorer. Baselines report their value in
/// `combined` (and `wilson_used`) with si = 0.
template <typename Scalar = double>
ScoreBreakdown<Scalar> score_tally(const Scorer& scorer, const VoteTally& tally,
                                   const Maxima& maxima) {
    switch (scorer.kind) {
        case Scorer::Kind::Improved: return combined_score<Scalar>(tally, maxima, scorer.config);
        case Scorer::Kind::OriginalWilson: {
            ScoreBreakdown<Scalar> out;
            out.wilson = wilson_interval<Scalar>(tally, static_cast<Scalar>(scorer.config.z));
            out.wilson_used =
                scorer.config.bound == Bound::Lower ? out.wilson.lower : out.wilson.upper;
            out.combined = out.wilson_used;
            return out;
        }
        case Scorer::Kind::AverageRating: {
            ScoreBreakdown<Scalar> out;
            out.wilson = wilson_interval<Scalar>(tally, Scalar(0));
            out.wilson_used = average_rating<Scalar>(tally);
            out.combined = out.wilson_used;
            return out;
        }
    }
    return {};
}

/// Returns `config` if every field is in range, otherwise throws ConfigError
/// naming the first bad field.
ScoringConfig validate_config(const ScoringConfig& config);

}  // namespace spotrank
