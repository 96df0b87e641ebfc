#include <doctest.h>

#include "biosim/csv.hpp"
#include "biosim/error.hpp"

using namespace biosim;

TEST_SUITE("csv") {

TEST_CASE("parse with blank lines and trimming") {
    const auto t = parse_csv("a, b\n\n 1 ,2\n3,4\n", "mem");
    CHECK(t.header == std::vector<std::string>{"a", "b"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0].line == 3);
    CHECK(parse_number(t.rows[1], 1, "mem") == 4.0);
}

TEST_CASE("errors carry source and line") {
    CHECK_THROWS_WITH_AS(parse_csv("a,b\n1\n", "f.csv"), doctest::Contains("f.csv:2"), ParseError);
    const auto t = parse_csv("a\nnan\nx\n", "g.csv");
    CHECK_THROWS_WITH_AS(parse_number(t.rows[0], 0, "g.csv"), doctest::Contains("g.csv:2"), ParseError);
    CHECK_THROWS_WITH_AS(parse_number(t.rows[1], 0, "g.csv"), doctest::Contains("g.csv:3"), ParseError);
}

TEST_CASE("format_double round trips") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 12345.678}) CHECK(std::stod(format_double(v)) == v);
}

}  // TEST_SUITE
