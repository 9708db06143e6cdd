#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "spotrank/io.hpp"
#include "spotrank/scoring.hpp"

using namespace spotrank;

namespace {

std::size_t error_line(const std::string& text, bool events) {
    std::istringstream in(text);
    try {
        if (events)
            replay(read_events(in));
        else
            read_tallies(in);
    } catch (const InputError& e) {
        return e.line();
    }
    return 0;
}

}  // namespace

TEST_CASE("read_tallies") {
    std::istringstream in(R"({"answer_id":"A","up":3,"down":1}

{"answer_id":"B","up":0,"down":0}
)");
    const auto t = read_tallies(in);
    REQUIRE(t.size() == 2);
    CHECK(t[0].answer_id == "A");
    CHECK(t[0].tally == VoteTally{3, 1});
    CHECK(t[1].tally == VoteTally{0, 0});

    CHECK(error_line("{\"answer_id\":\"A\",\"up\":1,\"down\":0}\n{\"answer_id\":\"A\",\"up\":2,\"down\":0}\n",
                     false) == 2);
    CHECK(error_line("{\"answer_id\":\"A\",\"up\":-1,\"down\":0}\n", false) == 1);
    CHECK(error_line("\n{\"answer_id\":\"A\",\"up\":1.5,\"down\":0}\n", false) == 2);
    CHECK(error_line("{\"answer_id\":\"A\",\"up\":1}\n", false) == 1);
    CHECK(error_line("{\"answer_id\":7,\"up\":1,\"down\":0}\n", false) == 1);
    CHECK(error_line("not json\n", false) == 1);
    CHECK(error_line("[1,2]\n", false) == 1);
}

TEST_CASE("state_from_tallies keeps file order and zero tallies") {
    const std::vector<TallyRecord> tallies{{"z", {0, 0}}, {"a", {5, 2}}, {"m", {1, 0}}};
    const auto q = state_from_tallies("q", tallies);
    REQUIRE(q.entries().size() == 3);
    CHECK(q.entries()[0].answer_id == "z");
    CHECK(q.entries()[0].created_seq < q.entries()[1].created_seq);
    CHECK(q.raw_maxima() == RawMaxima{7, 5, 2});
}

TEST_CASE("read_events and replay") {
    std::istringstream in(R"({"question_id":"q1","answer_id":"A","up_delta":1,"down_delta":0,"ts":1}
{"question_id":"q2","answer_id":"X","up_delta":0,"down_delta":2,"ts":1}
{"question_id":"q1","answer_id":"A","up_delta":-1,"down_delta":1,"ts":5}
)");
    const auto events = read_events(in);
    REQUIRE(events.size() == 3);
    CHECK(events[2].line == 3);
    const auto questions = replay(events);
    REQUIRE(questions.size() == 2);
    CHECK(questions.at("q1").find("A")->tally == VoteTally{0, 1});
    CHECK(questions.at("q2").raw_maxima() == RawMaxima{2, 0, 2});

    const std::string ok = "{\"question_id\":\"q\",\"answer_id\":\"A\",\"up_delta\":1,\"down_delta\":0,\"ts\":5}\n";
    CHECK(error_line(ok + "{\"question_id\":\"q\",\"answer_id\":\"A\",\"up_delta\":1,\"down_delta\":0,\"ts\":4}\n",
                     true) == 2);
    CHECK(error_line(ok + "{\"question_id\":\"q\",\"answer_id\":\"A\",\"up_delta\":0,\"down_delta\":0,\"ts\":6}\n",
                     true) == 2);
    CHECK(error_line(ok + "\n{\"question_id\":\"q\",\"answer_id\":\"A\",\"up_delta\":-2,\"down_delta\":0,\"ts\":6}\n",
                     true) == 3);
    CHECK(error_line(ok + ok + "{\"question_id\":\"q\",\"answer_id\":\"B\",\"up_delta\":0,\"down_delta\":-1,\"ts\":9}\n",
                     true) == 3);
}

TEST_CASE("replayed events rank like the aggregated tallies") {
    std::ostringstream log;
    std::map<std::string, VoteTally> totals;
    std::uint64_t ts = 0;
    for (int i = 0; i < 400; ++i) {
        const std::string id = "a" + std::to_string((i * 7) % 13);
        const int up = i % 3, down = (i % 5 == 0) ? 1 : 0;
        if (up == 0 && down == 0) continue;
        log << R"({"question_id":"q","answer_id":")" << id << R"(","up_delta":)" << up
            << R"(,"down_delta":)" << down << R"(,"ts":)" << ts++ << "}\n";
        totals[id].up += static_cast<Count>(up);
        totals[id].down += static_cast<Count>(down);
    }
    std::istringstream in(log.str());
    const auto replayed = replay(read_events(in)).at("q");

    std::vector<TallyRecord> records;
    for (const auto& entry : replayed.entries()) records.push_back({entry.answer_id, totals.at(entry.answer_id)});
    const auto batch = state_from_tallies("q", records);

    ScoringConfig c;
    const auto a = rank(replayed, c), b = rank(batch, c);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(a.entries[i].answer_id == b.entries[i].answer_id);
        CHECK(a.entries[i].score.combined == b.entries[i].score.combined);
    }
}

TEST_CASE("write_ranked_jsonl") {
    const auto q = state_from_tallies("q", {{"A", {1, 0}}, {"B", {50, 50}}});
    ScoringConfig c;
    c.p_weight = 0.0;
    std::ostringstream out;
    write_ranked_jsonl(out, rank(q, c), std::string("q"));
    std::istringstream lines(out.str());
    std::string line;
    std::getline(lines, line);
    const auto first = nlohmann::json::parse(line);
    CHECK(first["rank"] == 1);
    CHECK(first["question_id"] == "q");
    CHECK(first["answer_id"] == "B");
    CHECK(first["si"] == 1.0);
    CHECK(line.rfind(R"({"rank":1,"question_id":"q","answer_id":"B","up":50,"down":50,)", 0) == 0);
    std::getline(lines, line);
    CHECK(nlohmann::json::parse(line)["si"] == 0.01);
}
