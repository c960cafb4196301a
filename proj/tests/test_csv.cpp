#include <doctest.h>

#include "dsekit/csv.hpp"

using namespace dsekit;

TEST_CASE("front CSV round trip") {
    std::vector<ObjectiveVector> front{ObjectiveVector::minimizing({0.125, 3.0}),
                                       ObjectiveVector::minimizing({1e-9, -2.5})};
    const std::string text = front_to_csv(front);
    CHECK(text.substr(0, 6) == "o1,o2\n");
    const auto parsed = front_from_csv(text);
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0] == front[0]);
    CHECK(parsed[1] == front[1]);  // to_chars/from_chars round-trips exactly
}

TEST_CASE("front CSV errors carry line numbers") {
    CHECK_THROWS_AS(front_from_csv("bad header\n1,2\n"), parse_error);
    try {
        front_from_csv("o1,o2\n1,2\n3\n");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line() == 3);
    }
    try {
        front_from_csv("o1,o2\n1,abc\n");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(front_from_csv("o1,o2\n"), parse_error);
}

TEST_CASE("format_double is locale independent and exact") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(-1.0) == "-1");
    CHECK(parse_double(format_double(0.1 + 0.2), 0) == 0.1 + 0.2);
}
