#include <catch2/catch_amalgamated.hpp>

#include "sympfact/bounds.hpp"

using namespace sympfact;

TEST_CASE("Bound table rows are reproduced with built-in values") {
    struct Row {
        std::size_t n, d, lower, upper;
    };
    const std::vector<Row> rows = {
        {2, 1, 5, 16}, {3, 1, 5, 16}, {4, 1, 6, 28}, {5, 1, 6, 28},
        {2, 2, 5, 20}, {3, 2, 5, 20}, {4, 2, 6, 35}, {7, 2, 6, 35},
    };
    for (const auto& r : rows) {
        BoundResult b = k_bounds({r.n, r.d, {}, {}});
        INFO("n=" << r.n << " d=" << r.d);
        REQUIRE(b.lower == r.lower);
        REQUIRE(b.upper.has_value());
        REQUIRE(*b.upper == r.upper);
        REQUIRE(b.lower <= *b.upper);
        REQUIRE_FALSE(b.derivation.empty());
    }
}

TEST_CASE("Recursion and stabilization bounds evaluate directly") {
    REQUIRE(k_recursion_upper(4, 2) == 7);
    REQUIRE(k_recursion_upper(4, 3) == 14);
    REQUIRE(k_recursion_upper(4, 4) == 21);
    REQUIRE(k_recursion_upper(4, 5) == 28);
    REQUIRE(k_recursion_upper(1, 2) == 4);
    REQUIRE_THROWS_AS(k_recursion_upper(4, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(k_recursion_upper(0, 2), std::invalid_argument);

    REQUIRE(k_stabilization_upper(4) == 28);
    REQUIRE(k_stabilization_upper(5) == 35);
    REQUIRE(k_stabilization_upper(1) == 7);
    REQUIRE_THROWS_AS(k_stabilization_upper(0), std::invalid_argument);
}

TEST_CASE("Upper bound is conditional for high parameter dimension") {
    BoundResult open = k_bounds({3, 3, {}, {}});
    REQUIRE(open.lower == 5);
    REQUIRE_FALSE(open.upper.has_value());
    bool noted = false;
    for (const auto& line : open.derivation)
        if (line.find("unavailable") != std::string::npos) noted = true;
    REQUIRE(noted);

    BoundResult closed = k_bounds({3, 3, 6, {}});
    REQUIRE(closed.upper.has_value());
    REQUIRE(*closed.upper == 24);

    BoundResult large = k_bounds({4, 3, 6, {}});
    REQUIRE(*large.upper == 42);
}

TEST_CASE("Supplied values override and tighten") {
    BoundResult override_kt = k_bounds({2, 1, 10, {}});
    REQUIRE(*override_kt.upper == 40);
    bool noted = false;
    for (const auto& line : override_kt.derivation)
        if (line.find("ktilde-supplied") != std::string::npos) noted = true;
    REQUIRE(noted);

    BoundResult rec = k_bounds({3, 1, {}, 4});
    REQUIRE(rec.lower == 5);
    REQUIRE(*rec.upper == 14);

    BoundResult loose = k_bounds({2, 1, {}, 20});
    REQUIRE(*loose.upper == 16);
}

TEST_CASE("Inconsistent and invalid bound inputs are rejected") {
    REQUIRE_THROWS_AS(k_bounds({2, 1, 1, {}}), std::invalid_argument);
    REQUIRE_THROWS_AS(k_bounds({1, 1, {}, {}}), std::invalid_argument);
    REQUIRE_THROWS_AS(k_bounds({2, 0, {}, {}}), std::invalid_argument);
    REQUIRE_THROWS_AS(k_bounds({2, 1, 0, {}}), std::invalid_argument);
    REQUIRE_THROWS_AS(k_bounds({2, 1, {}, 0}), std::invalid_argument);
    REQUIRE_THROWS_AS(k_bounds({2, 3, {}, 1}), std::invalid_argument);
}
