#include "spotrank/ranking_state.hpp"

#include <algorithm>

#include "spotrank/scoring.hpp"

namespace spotrank {

namespace {

// Count + delta, or false when the result would be negative or overflow.
bool shifted(Count base, std::int64_t delta, Count& out) {
    if (delta >= 0) {
        const auto d = static_cast<Count>(delta);
        if (base > UINT64_MAX - d) return false;
        out = base + d;
        return true;
    }
    const auto d = static_cast<Count>(-(delta + 1)) + 1;
    if (d > base) return false;
    out = base - d;
    return true;
}

template <typename Get>
Count rescan(const std::vector<AnswerEntry>& entries, Get get) {
    Count best = 0;
    for (const auto& e : entries) best = std::max(best, get(e.tally));
    return best;
}

// Updates one cached maximum after a single answer's value moved old -> now.
template <typename Get>
void refresh(Count& cached, Count old, Count now, const std::vector<AnswerEntry>& entries,
             Get get) {
    if (now >= old)
        cached = std::max(cached, now);
    else if (old == cached)
        cached = rescan(entries, get);
}

}  // namespace

RawMaxima recompute_maxima(std::span<const AnswerEntry> entries) {
    RawMaxima m;
    for (const auto& e : entries) {
        m.n = std::max(m.n, e.tally.total());
        m.u = std::max(m.u, e.tally.up);
        m.d = std::max(m.d, e.tally.down);
    }
    return m;
}

const AnswerEntry* QuestionState::find(const std::string& answer_id) const {
    auto it = index_.find(answer_id);
    return it == index_.end() ? nullptr : &entries_[it->second];
}

void QuestionState::add_answer(const std::string& answer_id) {
    if (index_.count(answer_id)) return;
    const std::size_t slot = entries_.size();
    entries_.push_back({answer_id, {}, slot});
    index_.emplace(answer_id, slot);
}

bool QuestionState::apply_event(const VoteEvent& event) {
    using Code = RankingError::Code;
    if (event.question_id != question_id_)
        throw RankingError(Code::UnknownQuestion, "event for question '" + event.question_id +
                                                      "' applied to question '" + question_id_ +
                                                      "'");
    if (event.up_delta == 0 && event.down_delta == 0)
        throw RankingError(Code::EmptyEvent, "event for answer '" + event.answer_id +
                                                 "' has no non-zero delta");

    const AnswerEntry* existing = find(event.answer_id);
    const VoteTally before = existing ? existing->tally : VoteTally{};
    VoteTally after;
    if (!shifted(before.up, event.up_delta, after.up) ||
        !shifted(before.down, event.down_delta, after.down) ||
        after.up > UINT64_MAX - after.down)
        throw RankingError(Code::NegativeResultingCount,
                           "event would drive a count of answer '" + event.answer_id +
                               "' below zero");

    if (!existing) add_answer(event.answer_id);
    const std::size_t slot = index_.at(event.answer_id);
    entries_[slot].tally = after;
    ++event_count_;

    const RawMaxima previous = maxima_;
    refresh(maxima_.n, before.total(), after.total(), entries_,
            [](const VoteTally& t) { return t.total(); });
    refresh(maxima_.u, before.up, after.up, entries_, [](const VoteTally& t) { return t.up; });
    refresh(maxima_.d, before.down, after.down, entries_,
            [](const VoteTally& t) { return t.down; });
    return maxima_ != previous;
}

RankedList rank(std::span<const AnswerEntry> entries, const RawMaxima& raw,
                const Scorer& scorer) {
    RankedList out;
    out.scorer = scorer;
    out.maxima = effective_maxima(raw.n, raw.u, raw.d, scorer.config.n_max_floor);
    out.entries.reserve(entries.size());
    for (const auto& e : entries)
        out.entries.push_back(
            {e.answer_id, e.tally, e.created_seq, score_tally<double>(scorer, e.tally, out.maxima)});

    std::sort(out.entries.begin(), out.entries.end(), [](const RankedEntry& a, const RankedEntry& b) {
        if (a.score.combined != b.score.combined) return a.score.combined > b.score.combined;
        if (a.tally.up != b.tally.up) return a.tally.up > b.tally.up;
        return a.created_seq < b.created_seq;
    });
    return out;
}

}  // namespace spotrank
