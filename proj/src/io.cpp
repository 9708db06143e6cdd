#include "spotrank/io.hpp"

#include <istream>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

#include "spotrank/format.hpp"

namespace spotrank {

namespace {

using Json = nlohmann::ordered_json;

bool blank(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

Json parse_object(const std::string& line, std::size_t number) {
    Json obj;
    try {
        obj = Json::parse(line);
    } catch (const Json::parse_error& e) {
        throw InputError(number, std::string("malformed JSON: ") + e.what());
    }
    if (!obj.is_object()) throw InputError(number, "expected a JSON object");
    return obj;
}

std::string string_field(const Json& obj, const char* key, std::size_t line) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string())
        throw InputError(line, std::string("field '") + key + "' must be a string");
    return it->get<std::string>();
}

std::int64_t int_field(const Json& obj, const char* key, std::size_t line) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_number_integer())
        throw InputError(line, std::string("field '") + key + "' must be an integer");
    if (it->is_number_unsigned() && it->get<std::uint64_t>() > INT64_MAX)
        throw InputError(line, std::string("field '") + key + "' is out of range");
    return it->get<std::int64_t>();
}

Count count_field(const Json& obj, const char* key, std::size_t line) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_number_integer())
        throw InputError(line, std::string("field '") + key + "' must be an integer");
    if (it->is_number_unsigned()) return it->get<std::uint64_t>();
    const auto v = it->get<std::int64_t>();
    if (v < 0) throw InputError(line, std::string("field '") + key + "' must be non-negative");
    return static_cast<Count>(v);
}

double g12(double x) { return round_g12(x) + 0.0; }

Json ranked_object(const RankedEntry& e, std::size_t rank,
                   const std::optional<std::string>& question_id) {
    Json obj;
    obj["rank"] = rank;
    if (question_id) obj["question_id"] = *question_id;
    obj["answer_id"] = e.answer_id;
    obj["up"] = e.tally.up;
    obj["down"] = e.tally.down;
    obj["wilson_lower"] = g12(e.score.wilson.lower);
    obj["si"] = g12(e.score.si);
    obj["combined"] = g12(e.score.combined);
    return obj;
}

}  // namespace

std::vector<TallyRecord> read_tallies(std::istream& in) {
    std::vector<TallyRecord> out;
    std::unordered_set<std::string> seen;
    std::string line;
    for (std::size_t number = 1; std::getline(in, line); ++number) {
        if (blank(line)) continue;
        const Json obj = parse_object(line, number);
        TallyRecord rec{string_field(obj, "answer_id", number),
                        {count_field(obj, "up", number), count_field(obj, "down", number)}};
        if (!seen.insert(rec.answer_id).second)
            throw InputError(number, "duplicate answer_id '" + rec.answer_id + "'");
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<EventRecord> read_events(std::istream& in) {
    std::vector<EventRecord> out;
    std::string line;
    for (std::size_t number = 1; std::getline(in, line); ++number) {
        if (blank(line)) continue;
        const Json obj = parse_object(line, number);
        EventRecord rec;
        rec.line = number;
        rec.event.question_id = string_field(obj, "question_id", number);
        rec.event.answer_id = string_field(obj, "answer_id", number);
        rec.event.up_delta = int_field(obj, "up_delta", number);
        rec.event.down_delta = int_field(obj, "down_delta", number);
        rec.event.timestamp = int_field(obj, "ts", number);
        if (rec.event.up_delta == 0 && rec.event.down_delta == 0)
            throw InputError(number, "event has no non-zero delta");
        if (!out.empty() && rec.event.timestamp < out.back().event.timestamp)
            throw InputError(number, "timestamp " + std::to_string(rec.event.timestamp) +
                                         " is earlier than the previous event's " +
                                         std::to_string(out.back().event.timestamp));
        out.push_back(std::move(rec));
    }
    return out;
}

QuestionState state_from_tallies(const std::string& question_id,
                                 const std::vector<TallyRecord>& tallies) {
    QuestionState state(question_id);
    for (const auto& t : tallies) {
        if (t.tally.up > INT64_MAX || t.tally.down > INT64_MAX)
            throw std::out_of_range("tally of '" + t.answer_id + "' is too large");
        state.add_answer(t.answer_id);
        if (t.tally.total() == 0) continue;
        state.apply_event({question_id, t.answer_id, static_cast<std::int64_t>(t.tally.up),
                           static_cast<std::int64_t>(t.tally.down), 0});
    }
    return state;
}

std::map<std::string, QuestionState> replay(const std::vector<EventRecord>& events) {
    std::map<std::string, QuestionState> questions;
    for (const auto& rec : events) {
        auto it = questions.try_emplace(rec.event.question_id, rec.event.question_id).first;
        try {
            it->second.apply_event(rec.event);
        } catch (const RankingError& e) {
            throw InputError(rec.line, e.what());
        }
    }
    return questions;
}

void write_ranked_jsonl(std::ostream& out, const RankedList& list,
                        const std::optional<std::string>& question_id) {
    std::size_t rank = 1;
    for (const auto& e : list.entries) out << ranked_object(e, rank++, question_id).dump() << '\n';
}

void write_trajectory_jsonl(std::ostream& out, const Trajectory& trajectory) {
    std::vector<std::string> labels;
    for (const auto& s : trajectory.scorers) labels.push_back(label(s));
    for (const auto& snap : trajectory.snapshots) {
        for (std::size_t s = 0; s < snap.rankings.size(); ++s) {
            Json line;
            line["event_index"] = snap.event_index;
            line["scorer"] = labels[s];
            Json ranking = Json::array();
            for (const auto& e : snap.rankings[s].entries) {
                Json item;
                item["answer_id"] = e.answer_id;
                item["up"] = e.tally.up;
                item["down"] = e.tally.down;
                item["combined"] = g12(e.score.combined);
                ranking.push_back(std::move(item));
            }
            line["ranking"] = std::move(ranking);
            out << line.dump() << '\n';
        }
    }
}

void write_report_json(std::ostream& out, const StabilityReport& report, const StreamSpec& spec,
                       std::size_t snapshot_count) {
    Json doc;
    doc["seed"] = spec.seed;
    doc["total_events"] = spec.total_events;
    doc["snapshots"] = snapshot_count;
    Json scorers = Json::array();
    for (const auto& s : report.per_scorer) {
        Json item;
        item["scorer"] = s.scorer;
        item["mean_adjacent_tau"] = g12(s.mean_adjacent_tau);
        item["rank1_changes"] = s.rank1_changes;
        scorers.push_back(std::move(item));
    }
    doc["scorers"] = std::move(scorers);
    Json agreement = Json::array();
    for (const auto& a : report.agreement) {
        Json item;
        item["a"] = a.scorer_a;
        item["b"] = a.scorer_b;
        item["final_tau"] = g12(a.final_tau);
        agreement.push_back(std::move(item));
    }
    doc["agreement"] = std::move(agreement);
    out << doc.dump(2) << '\n';
}

}  // namespace spotrank
