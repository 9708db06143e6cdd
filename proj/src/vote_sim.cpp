#include "spotrank/vote_sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "spotrank/scoring.hpp"

namespace spotrank {

namespace {

double unit_interval(std::uint64_t word) {
    return static_cast<double>(word >> 11) * 0x1.0p-53;
}

// Keeps the relative order `order` gives to the ids in `keep`.
std::vector<std::string> restricted(const std::vector<std::string>& order,
                                    const std::unordered_set<std::string>& keep) {
    std::vector<std::string> out;
    for (const auto& id : order)
        if (keep.count(id)) out.push_back(id);
    return out;
}

double tau_or_one(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.size() < 2) return 1.0;
    return kendall_tau(a, b);
}

}  // namespace

void validate_stream(const StreamSpec& spec) {
    using Code = SimError::Code;
    if (spec.answers.empty()) throw SimError(Code::InvalidSpec, "at least one answer profile is required");
    if (spec.total_events < 1) throw SimError(Code::InvalidSpec, "total events must be positive");
    std::unordered_set<std::string> ids;
    double weight = 0;
    for (const auto& a : spec.answers) {
        if (a.answer_id.empty()) throw SimError(Code::InvalidSpec, "answer id must not be empty");
        if (!ids.insert(a.answer_id).second)
            throw SimError(Code::InvalidSpec, "duplicate answer id '" + a.answer_id + "'");
        if (!(a.up_probability >= 0.0 && a.up_probability <= 1.0))
            throw SimError(Code::InvalidSpec,
                           "up probability of '" + a.answer_id + "' must lie in [0, 1]");
        if (!(a.arrival_weight > 0.0) || !std::isfinite(a.arrival_weight))
            throw SimError(Code::InvalidSpec,
                           "arrival weight of '" + a.answer_id + "' must be positive");
        weight += a.arrival_weight;
    }
    if (!(weight > 0.0) || !std::isfinite(weight))
        throw SimError(Code::InvalidSpec, "arrival weights must have a positive finite sum");
}

std::vector<VoteEvent> generate_events(const StreamSpec& spec) {
    validate_stream(spec);

    std::vector<double> cumulative;
    cumulative.reserve(spec.answers.size());
    double total = 0;
    for (const auto& a : spec.answers) cumulative.push_back(total += a.arrival_weight);

    std::mt19937_64 rng(spec.seed);
    std::vector<VoteEvent> events;
    events.reserve(spec.total_events);
    for (std::uint64_t i = 0; i < spec.total_events; ++i) {
        const double target = unit_interval(rng()) * total;
        auto pick = static_cast<std::size_t>(
            std::upper_bound(cumulative.begin(), cumulative.end(), target) - cumulative.begin());
        pick = std::min(pick, spec.answers.size() - 1);
        const AnswerProfile& answer = spec.answers[pick];
        const bool up = unit_interval(rng()) < answer.up_probability;
        events.push_back({kSimQuestionId, answer.answer_id, up ? 1 : 0, up ? 0 : 1,
                          static_cast<std::int64_t>(i)});
    }
    return events;
}

Trajectory simulate(const StreamSpec& spec, std::span<const Scorer> scorers,
                    std::uint64_t cadence) {
    if (scorers.empty()) throw SimError(SimError::Code::InvalidSpec, "at least one scorer is required");
    if (cadence < 1) throw SimError(SimError::Code::InvalidSpec, "cadence must be positive");
    for (const auto& s : scorers) {
        try {
            validate_config(s.config);
        } catch (const ConfigError& e) {
            throw SimError(SimError::Code::InvalidSpec, e.what());
        }
    }

    const auto events = generate_events(spec);
    Trajectory out;
    out.scorers.assign(scorers.begin(), scorers.end());
    for (std::uint64_t i = 0; i < events.size(); ++i) {
        out.final_state.apply_event(events[i]);
        const std::uint64_t applied = i + 1;
        if (applied % cadence == 0 || applied == events.size()) {
            TrajectorySnapshot snap;
            snap.event_index = applied;
            snap.rankings.reserve(scorers.size());
            for (const auto& s : scorers) snap.rankings.push_back(rank(out.final_state, s));
            out.snapshots.push_back(std::move(snap));
        }
    }
    return out;
}

double kendall_tau(std::span<const std::string> a, std::span<const std::string> b) {
    using Code = SimError::Code;
    if (a.size() != b.size()) throw SimError(Code::MismatchedIdSets, "rankings differ in length");
    if (a.size() < 2) throw SimError(Code::TooFewElements, "kendall tau needs at least two ids");

    std::unordered_map<std::string_view, std::size_t> position;
    for (std::size_t i = 0; i < b.size(); ++i)
        if (!position.emplace(b[i], i).second)
            throw SimError(Code::MismatchedIdSets, "duplicate id '" + b[i] + "'");
    std::vector<std::size_t> mapped;
    mapped.reserve(a.size());
    for (const auto& id : a) {
        auto it = position.find(id);
        if (it == position.end()) throw SimError(Code::MismatchedIdSets, "id '" + id + "' missing");
        mapped.push_back(it->second);
    }
    if (std::unordered_set<std::size_t>(mapped.begin(), mapped.end()).size() != mapped.size())
        throw SimError(Code::MismatchedIdSets, "duplicate id in first ranking");

    const auto m = static_cast<std::int64_t>(mapped.size());
    std::int64_t score = 0;
    for (std::int64_t i = 0; i < m; ++i)
        for (std::int64_t j = i + 1; j < m; ++j) score += mapped[i] < mapped[j] ? 1 : -1;
    return static_cast<double>(score) / (static_cast<double>(m) * static_cast<double>(m - 1) / 2.0);
}

std::vector<std::string> ranked_ids(const RankedList& list) {
    std::vector<std::string> ids;
    ids.reserve(list.entries.size());
    for (const auto& e : list.entries) ids.push_back(e.answer_id);
    return ids;
}

StabilityReport stability_report(const Trajectory& trajectory) {
    if (trajectory.snapshots.size() < 2)
        throw SimError(SimError::Code::TooFewSnapshots,
                       "stability needs at least two snapshots, got " +
                           std::to_string(trajectory.snapshots.size()));

    StabilityReport report;
    const std::size_t scorers = trajectory.scorers.size();
    for (std::size_t s = 0; s < scorers; ++s) {
        ScorerStability stats{label(trajectory.scorers[s]), 0.0, 0};
        double tau_sum = 0;
        for (std::size_t k = 1; k < trajectory.snapshots.size(); ++k) {
            const auto prev = ranked_ids(trajectory.snapshots[k - 1].rankings[s]);
            const auto next = ranked_ids(trajectory.snapshots[k].rankings[s]);
            const std::unordered_set<std::string> prev_ids(prev.begin(), prev.end());
            std::unordered_set<std::string> shared;
            for (const auto& id : next)
                if (prev_ids.count(id)) shared.insert(id);
            tau_sum += tau_or_one(restricted(prev, shared), restricted(next, shared));
            if (!prev.empty() && !next.empty() && prev.front() != next.front())
                ++stats.rank1_changes;
        }
        stats.mean_adjacent_tau = tau_sum / static_cast<double>(trajectory.snapshots.size() - 1);
        report.per_scorer.push_back(std::move(stats));
    }

    const auto& last = trajectory.snapshots.back();
    for (std::size_t a = 0; a < scorers; ++a)
        for (std::size_t b = a + 1; b < scorers; ++b)
            report.agreement.push_back({label(trajectory.scorers[a]), label(trajectory.scorers[b]),
                                        tau_or_one(ranked_ids(last.rankings[a]),
                                                   ranked_ids(last.rankings[b]))});
    return report;
}

}  // namespace spotrank
