#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spotrank/ranking_state.hpp"
#include "spotrank/vote_sim.hpp"

namespace spotrank {

/// Bad input data; `line()` is 1-based.
class InputError : public std::runtime_error {
public:
    InputError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct TallyRecord {
    std::string answer_id;
    VoteTally tally;
};

struct EventRecord {
    std::size_t line = 0;
    VoteEvent event;
};

/// `{"answer_id": str, "up": int>=0, "down": int>=0}` per line. Blank lines
/// are skipped; duplicate ids are an error.
std::vector<TallyRecord> read_tallies(std::istream& in);

/// `{"question_id", "answer_id", "up_delta", "down_delta", "ts"}` per line,
/// with non-decreasing ts and at least one non-zero delta.
std::vector<EventRecord> read_events(std::istream& in);

/// A question built from tallies in file order (file order is created_seq).
QuestionState state_from_tallies(const std::string& question_id,
                                 const std::vector<TallyRecord>& tallies);

/// Applies events per question; InputError names the line of a rejected event.
std::map<std::string, QuestionState> replay(const std::vector<EventRecord>& events);

/// One object per answer: rank, [question_id,] answer_id, up, down,
/// wilson_lower, si, combined.
void write_ranked_jsonl(std::ostream& out, const RankedList& list,
                        const std::optional<std::string>& question_id = std::nullopt);

/// One line per (snapshot, scorer): event_index, scorer, ranking.
void write_trajectory_jsonl(std::ostream& out, const Trajectory& trajectory);

void write_report_json(std::ostream& out, const StabilityReport& report, const StreamSpec& spec,
                       std::size_t snapshot_count);

}  // namespace spotrank
