#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "spotrank/io.hpp"
#include "spotrank/scoring.hpp"
#include "spotrank/vote_sim.hpp"

using namespace spotrank;

namespace {

ScoringConfig half_whole() {
    ScoringConfig c;
    c.z = 2;
    c.p_weight = 0.5;
    c.si_kind = SiKind::Whole;
    return c;
}

std::string trajectory_text(const Trajectory& t) {
    std::ostringstream out;
    write_trajectory_jsonl(out, t);
    return out.str();
}

}  // namespace

TEST_CASE("kendall_tau") {
    const std::vector<std::string> five{"a", "b", "c", "d", "e"};
    std::vector<std::string> reversed(five.rbegin(), five.rend());
    CHECK(kendall_tau(five, five) == 1.0);
    CHECK(kendall_tau(five, reversed) == -1.0);

    const std::vector<std::string> a{"1", "2", "3", "4"}, b{"1", "3", "2", "4"};
    CHECK(kendall_tau(a, b) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(oracle::brute_kendall(a, b) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

    auto code = [](std::vector<std::string> x, std::vector<std::string> y) {
        try {
            kendall_tau(x, y);
        } catch (const SimError& e) {
            return e.code();
        }
        return SimError::Code::InvalidSpec;
    };
    CHECK(code({"a"}, {"a"}) == SimError::Code::TooFewElements);
    CHECK(code({"a", "b"}, {"a", "c"}) == SimError::Code::MismatchedIdSets);
    CHECK(code({"a", "b"}, {"a", "b", "c"}) == SimError::Code::MismatchedIdSets);
    CHECK(code({"a", "a"}, {"a", "b"}) == SimError::Code::MismatchedIdSets);
}

TEST_CASE("kendall_tau matches pairwise counting on random permutations") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t m = 2 + rng() % 30;
        std::vector<std::string> a;
        for (std::size_t i = 0; i < m; ++i) a.push_back("id" + std::to_string(i));
        std::shuffle(a.begin(), a.end(), rng);
        auto b = a;
        std::shuffle(b.begin(), b.end(), rng);
        const double tau = kendall_tau(a, b);
        REQUIRE(tau == doctest::Approx(oracle::brute_kendall(a, b)).epsilon(1e-14));
        REQUIRE(kendall_tau(a, a) == 1.0);
        std::vector<std::string> r(a.rbegin(), a.rend());
        REQUIRE(kendall_tau(a, r) == -1.0);
    }
}

TEST_CASE("stream validation") {
    StreamSpec s;
    CHECK_THROWS_AS(validate_stream(s), SimError);
    s.answers = {{"a", 1.5, 1.0}};
    CHECK_THROWS_AS(validate_stream(s), SimError);
    s.answers = {{"a", 0.5, 0.0}};
    CHECK_THROWS_AS(validate_stream(s), SimError);
    s.answers = {{"a", 0.5, 1.0}, {"a", 0.5, 1.0}};
    CHECK_THROWS_AS(validate_stream(s), SimError);
    s.answers = {{"a", 0.5, 1.0}};
    s.total_events = 0;
    CHECK_THROWS_AS(validate_stream(s), SimError);
    s.total_events = 5;
    CHECK_NOTHROW(validate_stream(s));
}

TEST_CASE("generated events follow the documented generator") {
    StreamSpec s{{{"a", 0.25, 1.0}, {"b", 0.75, 3.0}}, 50, 12345};
    const auto events = generate_events(s);
    std::mt19937_64 rng(12345);
    for (std::size_t i = 0; i < events.size(); ++i) {
        const double pick = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 4.0;
        const auto& expect = pick < 1.0 ? s.answers[0] : s.answers[1];
        const bool up = static_cast<double>(rng() >> 11) * 0x1.0p-53 < expect.up_probability;
        REQUIRE(events[i].answer_id == expect.answer_id);
        REQUIRE(events[i].up_delta == (up ? 1 : 0));
        REQUIRE(events[i].down_delta == (up ? 0 : 1));
        REQUIRE(events[i].timestamp == static_cast<std::int64_t>(i));
    }
}

TEST_CASE("one unanimous answer") {
    StreamSpec s{{{"only", 1.0, 1.0}}, 10, 7};
    const std::vector<Scorer> scorers{Scorer::original_wilson(2), Scorer::improved(half_whole())};
    const auto t = simulate(s, scorers, 3);
    CHECK(t.final_state.find("only")->tally == VoteTally{10, 0});
    REQUIRE(t.snapshots.size() == 4);  // after 3, 6, 9 and 10 events
    CHECK(t.snapshots.back().event_index == 10);
    for (const auto& snap : t.snapshots)
        for (const auto& list : snap.rankings) CHECK(list.entries.front().answer_id == "only");
    const auto report = stability_report(t);
    for (const auto& s2 : report.per_scorer) {
        CHECK(s2.mean_adjacent_tau == 1.0);
        CHECK(s2.rank1_changes == 0);
    }
    REQUIRE(report.agreement.size() == 1);
    CHECK(report.agreement[0].final_tau == 1.0);
}

TEST_CASE("simulation is deterministic") {
    StreamSpec s{{{"a", 0.6, 2.0}, {"b", 0.4, 1.0}, {"c", 0.9, 0.5}}, 2000, 42};
    const std::vector<Scorer> scorers{Scorer::original_wilson(2), Scorer::average_rating(),
                                      Scorer::improved(half_whole())};
    CHECK(trajectory_text(simulate(s, scorers, 50)) == trajectory_text(simulate(s, scorers, 50)));
    s.seed = 43;
    const auto other = trajectory_text(simulate(s, scorers, 50));
    s.seed = 42;
    CHECK(other != trajectory_text(simulate(s, scorers, 50)));
}

TEST_CASE("snapshots match an independent replay of the event prefix") {
    StreamSpec s{{{"a", 0.3, 1.0}, {"b", 0.5, 2.0}, {"c", 0.8, 1.5}, {"d", 1.0, 0.1}}, 1500, 5};
    const std::vector<Scorer> scorers{Scorer::improved(half_whole())};
    const auto t = simulate(s, scorers, 97);
    const auto events = generate_events(s);
    for (const auto& snap : t.snapshots) {
        std::map<std::string, oracle::Tally> counts;
        for (std::uint64_t i = 0; i < snap.event_index; ++i) {
            counts[events[i].answer_id].up += static_cast<Count>(events[i].up_delta);
            counts[events[i].answer_id].down += static_cast<Count>(events[i].down_delta);
        }
        const auto& list = snap.rankings[0];
        REQUIRE(list.entries.size() == counts.size());
        for (const auto& e : list.entries) {
            REQUIRE(e.tally.up == counts.at(e.answer_id).up);
            REQUIRE(e.tally.down == counts.at(e.answer_id).down);
        }
        const auto [n, u, d] = oracle::brute_maxima(counts);
        CHECK(list.maxima == effective_maxima(n, u, d));
    }
    Count total = 0;
    for (const auto& e : t.final_state.entries()) total += e.tally.total();
    CHECK(total == s.total_events);
}

TEST_CASE("controversial answer wins under the improved scorer") {
    StreamSpec s{{{"A", 0.5, 10.0}, {"B", 1.0, 1.0}}, 10000, 2018};
    const std::vector<Scorer> scorers{Scorer::original_wilson(2), Scorer::improved(half_whole())};
    const auto t = simulate(s, scorers, 1000);
    const auto& last = t.snapshots.back();
    CHECK(ranked_ids(last.rankings[0]) == std::vector<std::string>{"B", "A"});
    CHECK(ranked_ids(last.rankings[1]) == std::vector<std::string>{"A", "B"});
    const auto report = stability_report(t);
    CHECK(report.agreement[0].final_tau == -1.0);
}

TEST_CASE("stability_report") {
    Trajectory t;
    t.scorers = {Scorer::average_rating()};
    CHECK_THROWS_AS(stability_report(t), SimError);

    auto list_of = [](std::vector<std::string> ids) {
        RankedList l;
        for (auto& id : ids) l.entries.push_back({id, {}, 0, {}});
        return l;
    };
    t.snapshots.push_back({1, {list_of({"a", "b", "c"})}});
    t.snapshots.push_back({2, {list_of({"c", "b", "a"})}});
    const auto r = stability_report(t);
    CHECK(r.per_scorer[0].mean_adjacent_tau == -1.0);
    CHECK(r.per_scorer[0].rank1_changes == 1);
    CHECK(r.agreement.empty());

    // a newcomer is ignored when comparing adjacent snapshots
    t.snapshots.push_back({3, {list_of({"d", "c", "b", "a"})}});
    const auto r2 = stability_report(t);
    CHECK(r2.per_scorer[0].mean_adjacent_tau == 0.0);
    CHECK(r2.per_scorer[0].rank1_changes == 2);
}

TEST_CASE("report taus stay in [-1, 1] on random streams") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::vector<Scorer> scorers{Scorer::original_wilson(2), Scorer::average_rating(),
                                      Scorer::improved(half_whole())};
    for (int trial = 0; trial < 40; ++trial) {
        StreamSpec s;
        const int answers = 1 + static_cast<int>(rng() % 8);
        for (int a = 0; a < answers; ++a)
            s.answers.push_back({"a" + std::to_string(a), unit(rng), 0.1 + unit(rng)});
        s.total_events = 50 + rng() % 500;
        s.seed = rng();
        const auto report = stability_report(simulate(s, scorers, 1 + rng() % 40));
        for (const auto& p : report.per_scorer)
            REQUIRE((p.mean_adjacent_tau >= -1.0 && p.mean_adjacent_tau <= 1.0));
        for (const auto& p : report.agreement)
            REQUIRE((p.final_tau >= -1.0 && p.final_tau <= 1.0));
    }
}
