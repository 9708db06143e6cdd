#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "spotrank/types.hpp"

namespace spotrank {

struct AnswerEntry {
    std::string answer_id;
    VoteTally tally;
    std::uint64_t created_seq = 0;

    friend bool operator==(const AnswerEntry&, const AnswerEntry&) = default;
};

struct VoteEvent {
    std::string question_id;
    std::string answer_id;
    std::int64_t up_delta = 0;
    std::int64_t down_delta = 0;
    std::int64_t timestamp = 0;
};

/// Unfloored maxima over a question's answers; all zero for an empty question.
struct RawMaxima {
    Count n = 0;
    Count u = 0;
    Count d = 0;

    friend constexpr bool operator==(const RawMaxima&, const RawMaxima&) = default;
};

class RankingError : public std::runtime_error {
public:
    enum class Code { UnknownQuestion, NegativeResultingCount, EmptyEvent };

    RankingError(Code code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Code code() const noexcept { return code_; }

private:
    Code code_;
};

/// Full rescan.
RawMaxima recompute_maxima(std::span<const AnswerEntry> entries);

/// Read-only copy of a question taken at one instant.
struct QuestionSnapshot {
    std::string question_id;
    std::vector<AnswerEntry> entries;
    RawMaxima maxima;
};

struct RankedEntry {
    std::string answer_id;
    VoteTally tally;
    std::uint64_t created_seq = 0;
    ScoreBreakdown<double> score;
};

struct RankedList {
    std::vector<RankedEntry> entries;
    Scorer scorer;
    Maxima maxima;
};

/**
 * Answers of one question with cached n/u/d maxima.
 *
 * Not internally synchronised: one writer per question. Non-negative deltas
 * update the caches in O(1); a decrement on the answer that holds a cached
 * maximum triggers a rescan of that maximum.
 */
class QuestionState {
public:
    explicit QuestionState(std::string question_id) : question_id_(std::move(question_id)) {}

    /// Applies one vote delta. Returns true iff any cached maximum changed.
    /// Throws RankingError and leaves the state untouched on rejection.
    bool apply_event(const VoteEvent& event);

    /// Registers an answer with a zero tally; no-op if it already exists.
    void add_answer(const std::string& answer_id);

    const std::string& question_id() const noexcept { return question_id_; }
    const std::vector<AnswerEntry>& entries() const noexcept { return entries_; }
    const RawMaxima& raw_maxima() const noexcept { return maxima_; }
    std::uint64_t event_count() const noexcept { return event_count_; }

    /// nullptr when the answer has never been seen.
    const AnswerEntry* find(const std::string& answer_id) const;

    QuestionSnapshot snapshot() const { return {question_id_, entries_, maxima_}; }

    friend bool operator==(const QuestionState&, const QuestionState&) = default;

private:
    std::string question_id_;
    std::vector<AnswerEntry> entries_;
    std::unordered_map<std::string, std::size_t> index_;
    RawMaxima maxima_;
    std::uint64_t event_count_ = 0;
};

/// Scores every entry and sorts: combined desc, then up desc, then created_seq asc.
RankedList rank(std::span<const AnswerEntry> entries, const RawMaxima& raw, const Scorer& scorer);

inline RankedList rank(const QuestionState& state, const Scorer& scorer) {
    return rank(state.entries(), state.raw_maxima(), scorer);
}
inline RankedList rank(const QuestionState& state, const ScoringConfig& config) {
    return rank(state, Scorer::improved(config));
}
inline RankedList rank(const QuestionSnapshot& snap, const Scorer& scorer) {
    return rank(snap.entries, snap.maxima, scorer);
}

}  // namespace spotrank
