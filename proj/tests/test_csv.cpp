#include <doctest.h>

#include <string>
#include <vector>

#include "vocalign/common.hpp"
#include "vocalign/csv.hpp"

using namespace vocalign;

TEST_CASE("csv parse handles quoting and line endings") {
    const auto rows = csv::parse("a,b\n\"x,y\",\"he said \"\"hi\"\"\"\r\n,last\n");
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"a", "b"});
    CHECK(rows[1] == std::vector<std::string>{"x,y", "he said \"hi\""});
    CHECK(rows[2] == std::vector<std::string>{"", "last"});
}

TEST_CASE("csv parse embedded newline and no trailing newline") {
    const auto rows = csv::parse("\"line1\nline2\",v\nq,w");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0][0] == "line1\nline2");
    CHECK(rows[1] == std::vector<std::string>{"q", "w"});
}

TEST_CASE("csv parse rejects unterminated quotes, skips blank lines") {
    CHECK_THROWS_AS(csv::parse("\"open,field\n"), SchemaError);
    CHECK(csv::parse("a\n\nb\n").size() == 2);
    CHECK(csv::parse("").empty());
}

TEST_CASE("csv escape round-trips through parse") {
    const std::vector<std::string> fields = {"plain", "with,comma", "with\"quote", "multi\nline",
                                             ""};
    const std::string line = csv::join_row(fields);
    const auto rows = csv::parse(line + "\n");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0] == fields);
}

TEST_CASE("format_full round-trips doubles") {
    CHECK(csv::format_full(0.1414) == "0.1414");
    CHECK(csv::format_full(81.354787) == "81.354787");
    CHECK(csv::format_full(1.0 / 3.0) == "0.3333333333333333");
    CHECK(std::stod(csv::format_full(0.1 + 0.2)) == 0.1 + 0.2);
}

TEST_CASE("format_fixed truncates and strips") {
    CHECK(csv::format_fixed(0.8412698412698413, 4) == "0.8413");
    CHECK(csv::format_fixed(14.0, 4) == "14");
    CHECK(csv::format_fixed(-0.592, 4) == "-0.592");
    CHECK(csv::format_fixed(0.5, 4) == "0.5");
    CHECK(csv::format_fixed(-0.00001, 4) == "0");
    CHECK(csv::format_fixed(2.0 / 21.0, 4) == "0.0952");
}

TEST_CASE("metrics csv round trip") {
    const std::string text = csv::read_file("tests/data/reference_metrics.csv");
    const auto rows = csv::read_metrics(text);
    REQUIRE(rows.size() == 11);
    CHECK(rows[0].repo == "airflow");
    CHECK(*rows[0].shared_vocab == 0.1414);
    CHECK(*rows[10].maintainability_index == 79.994076);

    const std::string out = csv::write_metrics(rows);
    const auto again = csv::read_metrics(out);
    REQUIRE(again.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(again[i].repo == rows[i].repo);
        CHECK(*again[i].shared_vocab == *rows[i].shared_vocab);
        CHECK(*again[i].avg_cc == *rows[i].avg_cc);
        CHECK(*again[i].maintainability_index == *rows[i].maintainability_index);
    }
}

TEST_CASE("metrics csv null cells and schema errors") {
    const std::string header = std::string(kMetricsCsvHeader) + "\n";
    const auto rows = csv::read_metrics(header + "r1,,2.0,,,,\n");
    REQUIRE(rows.size() == 1);
    CHECK(!rows[0].shared_vocab.has_value());
    CHECK(*rows[0].avg_cc == 2.0);
    CHECK(!rows[0].maintainability_index.has_value());

    const std::string round = csv::write_metrics(rows);
    CHECK(round == header + "r1,,2,,,,\n");

    CHECK_THROWS_AS(csv::read_metrics("repo,foo\nr,1\n"), SchemaError);
    CHECK_THROWS_AS(csv::read_metrics(header + "r1,0.5\n"), SchemaError);
    CHECK_THROWS_AS(csv::read_metrics(header + "r1,abc,1,1,1,1,1\n"), SchemaError);
    CHECK_THROWS_AS(csv::read_metrics(""), SchemaError);
}

TEST_CASE("read_file missing path") {
    CHECK_THROWS_AS(csv::read_file("tests/data/does_not_exist.csv"), SourceNotFound);
}
