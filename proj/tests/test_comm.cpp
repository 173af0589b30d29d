#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "vocalign/comm.hpp"
#include "vocalign/csv.hpp"

using namespace vocalign;

namespace {

bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

CommMessage msg(double t, const std::string& session, int turn, Role role,
                const std::string& text, const std::string& group = "g") {
    CommMessage m;
    m.timestamp_s = t;
    m.group = group;
    m.session = session;
    m.turn_index = turn;
    m.role = role;
    m.text = text;
    return m;
}

} // namespace

TEST_CASE("iso 8601 parsing covers zones, fractions, and leap days") {
    CHECK(parse_iso8601("1970-01-01T00:00:00Z") == 0.0);
    CHECK(parse_iso8601("1970-01-01T00:01:40Z") == 100.0);
    CHECK(parse_iso8601("2024-03-01T12:00:00Z") == 1709294400.0);
    CHECK(parse_iso8601("2024-03-01T14:00:00+02:00") == 1709294400.0);
    CHECK(parse_iso8601("2024-03-01T11:30:00-00:30") == 1709294400.0);
    CHECK(parse_iso8601("2024-03-01T14:00:00+0200") == 1709294400.0);
    CHECK(parse_iso8601("2000-02-29T23:59:59Z") == 951868799.0);
    CHECK(parse_iso8601("1969-12-31T23:00:00Z") == -3600.0);
    CHECK(near(parse_iso8601("1970-01-01T00:00:00.5Z"), 0.5, 1e-9));
    CHECK(parse_iso8601("1970-01-01 00:00:00Z") == 0.0);

    CHECK_THROWS_AS(parse_iso8601("2024-03-01T12:00:00"), SchemaError); // no zone
    CHECK_THROWS_AS(parse_iso8601("2024-13-01T12:00:00Z"), SchemaError);
    CHECK_THROWS_AS(parse_iso8601("2023-02-29T00:00:00Z"), SchemaError);
    CHECK_THROWS_AS(parse_iso8601("2024-03-01T24:00:00Z"), SchemaError);
    CHECK_THROWS_AS(parse_iso8601("not a time"), SchemaError);
    CHECK_THROWS_AS(parse_iso8601("2024-03-01T12:00:00Z junk"), SchemaError);
}

TEST_CASE("avg words matches the documented examples") {
    CHECK(avg_words({msg(0, "s", 0, Role::User, "hi there"),
                     msg(1, "s", 1, Role::User, "ok")}) == 1.5);
    CHECK(avg_words({msg(0, "s", 0, Role::User, "")}) == 0.0);
    CHECK(avg_words({msg(0, "s", 0, Role::User, "a b c"),
                     msg(1, "s", 1, Role::User, "d e"),
                     msg(2, "s", 2, Role::User, "f")}) == 2.0);
    CHECK_THROWS_AS(avg_words({}), EmptyLog);
}

TEST_CASE("words by role splits and reconciles") {
    const std::vector<CommMessage> log = {
        msg(0, "s", 0, Role::User, "a b"),
        msg(1, "s", 1, Role::Assistant, "c d e f"),
    };
    const auto by_role = words_by_role(log);
    REQUIRE(by_role.size() == 2);
    CHECK(by_role.at(Role::User) == 2.0);
    CHECK(by_role.at(Role::Assistant) == 4.0);

    const auto only_user = words_by_role({msg(0, "s", 0, Role::User, "x")});
    CHECK(only_user.size() == 1);
    CHECK(only_user.count(Role::User) == 1);
    CHECK_THROWS_AS(words_by_role({}), EmptyLog);
}

TEST_CASE("response time pairs assistants with latest unconsumed user") {
    CHECK(avg_response_time({msg(0, "s", 0, Role::User, "q"),
                             msg(30, "s", 1, Role::Assistant, "a")}) == 30.0);

    CHECK(avg_response_time({msg(0, "s", 0, Role::User, "q"),
                             msg(10, "s", 1, Role::Assistant, "a"),
                             msg(20, "s", 2, Role::User, "q"),
                             msg(50, "s", 3, Role::Assistant, "a")}) == 20.0);

    // two users then two assistants: (5,10) and (0,20)
    CHECK(avg_response_time({msg(0, "s", 0, Role::User, "q"),
                             msg(5, "s", 1, Role::User, "q"),
                             msg(10, "s", 2, Role::Assistant, "a"),
                             msg(20, "s", 3, Role::Assistant, "a")}) == 12.5);

    // sessions do not leak into each other
    CHECK_THROWS_AS(avg_response_time({msg(0, "s1", 0, Role::User, "q"),
                                       msg(9, "s2", 0, Role::Assistant, "a")}),
                    NoPairs);
    CHECK_THROWS_AS(avg_response_time({msg(0, "s", 0, Role::Assistant, "a")}), NoPairs);
}

TEST_CASE("response time is invariant under timestamp translation") {
    std::vector<CommMessage> log = {
        msg(0, "s", 0, Role::User, "q"),     msg(12, "s", 1, Role::Assistant, "a"),
        msg(40, "s", 2, Role::User, "q"),    msg(47, "s", 3, Role::Assistant, "a"),
        msg(100, "s", 4, Role::User, "q"),   msg(160, "s", 5, Role::Assistant, "a"),
    };
    const double base = avg_response_time(log);
    for (auto& m : log)
        m.timestamp_s += 86400.0 * 365.0;
    CHECK(near(avg_response_time(log), base, 1e-9));
}

TEST_CASE("any-gap mode averages adjacent gaps regardless of role") {
    const std::vector<CommMessage> log = {
        msg(0, "s", 0, Role::User, "q"),
        msg(10, "s", 1, Role::User, "more"),
        msg(25, "s", 2, Role::Assistant, "a"),
    };
    CHECK(avg_response_time(log, true) == 12.5);
    CHECK(avg_response_time(log, false) == 15.0); // pairs with the t=10 user
    CHECK_THROWS_AS(avg_response_time({msg(0, "s", 0, Role::User, "q")}, true), NoPairs);
}

TEST_CASE("adjusted density matches documented examples and bounds") {
    CHECK(adjusted_density("aa aa") == 0.0);
    CHECK(near(adjusted_density("a b"), 0.6309297535714575, 1e-12));
    CHECK(adjusted_density("") == 0.0);
    CHECK(adjusted_density("single") == 0.0);
    CHECK(near(adjusted_density("a b c"), 0.792481250360578, 1e-12));
    CHECK(near(adjusted_density("x x y y"), 0.43067655807339306, 1e-12));
    CHECK(adjusted_density("Case case CASE") == 0.0); // lowercased first

    const char* samples[] = {"a", "a b b", "q w e r t y", "to be or not to be",
                             "x y x y x y x"};
    for (const auto* s : samples) {
        const double d = adjusted_density(s);
        CHECK(d >= 0.0);
        CHECK(d <= 1.0);
    }
}

TEST_CASE("density evolution: identity window and smoothing") {
    const std::vector<CommMessage> log = {
        msg(0, "s1", 0, Role::User, "x x"),       // 0
        msg(1, "s1", 1, Role::Assistant, "a b"),  // 0.6309...
        msg(2, "s1", 2, Role::User, "a b c"),     // 0.7925...
    };
    const auto raw = density_evolution(log, 1);
    REQUIRE(raw.size() == 3);
    CHECK(raw[0] == std::pair<int, double>{0, 0.0});
    CHECK(near(raw[1].second, 0.6309297535714575, 1e-12));
    CHECK(near(raw[2].second, 0.792481250360578, 1e-12));

    const auto smoothed = density_evolution(log, 2);
    CHECK(smoothed[0].second == 0.0);
    CHECK(near(smoothed[1].second, 0.6309297535714575 / 2.0, 1e-12));
    CHECK(near(smoothed[2].second, (0.6309297535714575 + 0.792481250360578) / 2.0, 1e-12));

    // means across sessions for the same turn
    const std::vector<CommMessage> two = {
        msg(0, "s1", 0, Role::User, "a b"),
        msg(0, "s2", 0, Role::User, "x x"),
    };
    const auto mean = density_evolution(two, 1);
    REQUIRE(mean.size() == 1);
    CHECK(near(mean[0].second, 0.6309297535714575 / 2.0, 1e-12));

    CHECK_THROWS_AS(density_evolution({}, 1), EmptyLog);
}

TEST_CASE("log parsing enforces the schema") {
    CHECK_THROWS_AS(parse_comm_log("time,group\n1,2\n"), SchemaError);
    CHECK_THROWS_AS(
        parse_comm_log("timestamp,group,session,turn_index,role,text\n"
                       "2025-01-06T09:00:00Z,g,s,-1,user,hi\n"),
        SchemaError);
    CHECK_THROWS_AS(
        parse_comm_log("timestamp,group,session,turn_index,role,text\n"
                       "2025-01-06T09:00:00Z,g,s,0,robot,hi\n"),
        SchemaError);
    CHECK_THROWS_AS(
        parse_comm_log("timestamp,group,session,turn_index,role,text\n"
                       "yesterday,g,s,0,user,hi\n"),
        SchemaError);
    CHECK(parse_comm_log("timestamp,group,session,turn_index,role,text\n").empty());

    const auto ok = parse_comm_log("timestamp,group,session,turn_index,role,text\n"
                                   "2025-01-06T09:00:00Z,g,s,0,USER,\"hi, there\"\n");
    REQUIRE(ok.size() == 1);
    CHECK(ok[0].role == Role::User);
    CHECK(ok[0].text == "hi, there");
}

TEST_CASE("crossover fixture: per-group report matches hand values") {
    const auto log = parse_comm_log(csv::read_file("tests/data/comm_crossover.csv"));
    REQUIRE(log.size() == 16);
    const auto reports = comm_report(log);
    REQUIRE(reports.size() == 2);

    const auto& control = reports[0];
    const auto& treatment = reports[1];
    CHECK(control.group == "control-1");
    CHECK(treatment.group == "treatment-1");

    for (const auto* r : {&control, &treatment}) {
        CHECK(r->messages == 8);
        CHECK(r->avg_words_per_message == 3.25);
        REQUIRE(r->avg_response_time_s.has_value());
        CHECK(*r->avg_response_time_s == 30.0);
        REQUIRE(r->density_by_turn.size() == 4);
    }
    CHECK(control.avg_words_by_role.at(Role::User) == 4.0);
    CHECK(control.avg_words_by_role.at(Role::Assistant) == 2.5);
    CHECK(treatment.avg_words_by_role.at(Role::User) == 2.5);
    CHECK(treatment.avg_words_by_role.at(Role::Assistant) == 4.0);

    const double d[4] = {0.0, 0.43067655807339306, 0.792481250360578,
                         0.8613531161467861};
    for (int t = 0; t < 4; ++t) {
        CHECK(control.density_by_turn[t].first == t);
        CHECK(near(treatment.density_by_turn[t].second, d[t], 1e-12));
        CHECK(near(control.density_by_turn[t].second, d[3 - t], 1e-12));
    }

    // treatment overtakes control between turns 1 and 2
    CHECK(treatment.density_by_turn[0].second < control.density_by_turn[0].second);
    CHECK(treatment.density_by_turn[1].second < control.density_by_turn[1].second);
    CHECK(treatment.density_by_turn[2].second > control.density_by_turn[2].second);
    CHECK(treatment.density_by_turn[3].second > control.density_by_turn[3].second);
}

TEST_CASE("report output is stable under input shuffling") {
    const std::string text = csv::read_file("tests/data/comm_crossover.csv");
    auto log1 = parse_comm_log(text);
    auto log2 = log1;
    std::reverse(log2.begin(), log2.end());
    const auto a = comm_report_json(comm_report(log1));
    const auto b = comm_report_json(comm_report(log2));
    CHECK(a == b);
    CHECK(density_csv(comm_report(log1)) == density_csv(comm_report(log2)));
    CHECK_THROWS_AS(comm_report({}), EmptyLog);
}

TEST_CASE("words-by-role reconciliation on the fixture") {
    const auto log = parse_comm_log(csv::read_file("tests/data/comm_crossover.csv"));
    const auto by_role = words_by_role(log);
    std::size_t total = 0;
    std::map<Role, std::size_t> counts;
    for (const auto& m : log) {
        std::size_t words = 0;
        bool in = false;
        for (const char c : m.text) {
            if (c == ' ' || c == '\t') { in = false; continue; }
            if (!in) { ++words; in = true; }
        }
        total += words;
        ++counts[m.role];
    }
    double reconstructed = 0.0;
    for (const auto& [role, mean] : by_role)
        reconstructed += mean * static_cast<double>(counts.at(role));
    CHECK(near(reconstructed, static_cast<double>(total), 1e-9));
    CHECK(near(avg_words(log) * static_cast<double>(log.size()),
               static_cast<double>(total), 1e-9));
}
