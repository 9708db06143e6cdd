#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "spotrank/ranking_state.hpp"

namespace spotrank {

struct AnswerProfile {
    std::string answer_id;
    double up_probability = 0.5;
    double arrival_weight = 1.0;
};

struct StreamSpec {
    std::vector<AnswerProfile> answers;
    std::uint64_t total_events = 1000;
    std::uint64_t seed = 1;
};

class SimError : public std::invalid_argument {
public:
    enum class Code { InvalidSpec, MismatchedIdSets, TooFewElements, TooFewSnapshots };

    SimError(Code code, const std::string& message)
        : std::invalid_argument(message), code_(code) {}

    Code code() const noexcept { return code_; }

private:
    Code code_;
};

/// Question id used for every simulated event.
inline constexpr const char* kSimQuestionId = "sim";

void validate_stream(const StreamSpec& spec);

/**
 * The single-vote event stream a spec describes.
 *
 * Generator: std::mt19937_64 seeded with `spec.seed`. Each event draws two
 * 64-bit words. The first, mapped to [0, 1) as (w >> 11) * 2^-53 and scaled by
 * the total arrival weight, picks the first answer whose cumulative weight
 * exceeds it. The second, mapped the same way, makes the vote an up-vote iff
 * it is below that answer's up_probability. Event i has timestamp i.
 */
std::vector<VoteEvent> generate_events(const StreamSpec& spec);

struct TrajectorySnapshot {
    std::uint64_t event_index = 0;      // events applied so far
    std::vector<RankedList> rankings;   // one per scorer, same order as the scorers
};

struct Trajectory {
    std::vector<Scorer> scorers;
    std::vector<TrajectorySnapshot> snapshots;
    QuestionState final_state{kSimQuestionId};
};

/// Replays generate_events(spec) through a QuestionState, ranking under every
/// scorer after each `cadence` events and after the last event.
Trajectory simulate(const StreamSpec& spec, std::span<const Scorer> scorers,
                    std::uint64_t cadence);

/// Kendall tau-a between two orderings of the same id set.
double kendall_tau(std::span<const std::string> a, std::span<const std::string> b);

struct ScorerStability {
    std::string scorer;
    double mean_adjacent_tau = 1.0;
    std::uint64_t rank1_changes = 0;
};

struct ScorerAgreement {
    std::string scorer_a;
    std::string scorer_b;
    double final_tau = 1.0;
};

struct StabilityReport {
    std::vector<ScorerStability> per_scorer;
    std::vector<ScorerAgreement> agreement;  // every unordered pair, in scorer order
};

/// Adjacent snapshots are compared on the answers present in both; fewer than
/// two shared answers counts as tau = 1.
StabilityReport stability_report(const Trajectory& trajectory);

std::vector<std::string> ranked_ids(const RankedList& list);

}  // namespace spotrank
