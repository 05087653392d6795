#include <cmath>

#include "doctest.h"

#include "splitq/errors.hpp"
#include "splitq/rng.hpp"
#include "splitq/text.hpp"

using namespace splitq;

TEST_CASE("format_double round-trips every value it prints") {
    SplitMix64 rng(64);
    for (int i = 0; i < 5000; ++i) {
        // spread mantissas across ~60 decades, both signs
        const double magnitude = std::exp((rng.next_unit() - 0.5) * 280.0);
        const double value = (rng.next() & 1 ? 1.0 : -1.0) * magnitude * rng.next_unit();
        CHECK(parse_double(format_double(value)) == value);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(0.0) == "0");
    CHECK(parse_double(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("parse_double rejects trailing garbage and empty input") {
    CHECK(parse_double("2.5") == 2.5);
    CHECK(parse_double("-1e-3") == -1e-3);
    CHECK_THROWS_AS(parse_double(""), InvalidParameter);
    CHECK_THROWS_AS(parse_double("1.5x"), InvalidParameter);
    CHECK_THROWS_AS(parse_double("rate"), InvalidParameter);
}
