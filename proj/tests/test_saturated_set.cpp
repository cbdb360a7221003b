#include "doctest.h"

#include "oracles.hpp"
#include "satfarey/saturated_set.hpp"

#include <cmath>
#include <numbers>
#include <set>

using namespace satfarey;

namespace {

std::vector<std::pair<Int, Int>> as_pairs(const SaturatedLevel& level)
{
    std::vector<std::pair<Int, Int>> out;
    for (const auto& e : level.elements)
        out.emplace_back(e.frac.num(), e.frac.den());
    return out;
}

}  // namespace

TEST_CASE("build_filter small levels")
{
    const auto l3 = build_filter(3);
    REQUIRE(l3.size() == 1);
    CHECK(l3.elements[0].frac == Fraction::make(1, 1));
    CHECK(l3.elements[0].height == 3);

    const auto l5 = build_filter(5);
    CHECK(as_pairs(l5) == std::vector<std::pair<Int, Int>>{{1, 3}, {1, 2}, {1, 1}});

    const auto l10 = build_filter(10);
    CHECK(l10.size() == 12);
    CHECK(l10.elements.front().frac == Fraction::make(1, 8));
    CHECK(l10.elements.back().frac == Fraction::make(1, 1));

    CHECK_THROWS_AS(build_filter(2), PreconditionError);
    CHECK_THROWS_AS(build_filter(kMaxLevel + 1), PreconditionError);
}

TEST_CASE("build_filter matches the scan oracle")
{
    for (Int Q = 3; Q <= 120; ++Q) {
        const auto lib = build_filter(Q);
        const auto ref = oracle::saturated_scan(Q);
        REQUIRE(lib.size() == ref.size());
        for (std::size_t i = 0; i < ref.size(); ++i) {
            REQUIRE(lib.elements[i].frac.num() == ref[i].a);
            REQUIRE(lib.elements[i].frac.den() == ref[i].q);
            REQUIRE(lib.elements[i].inv == ref[i].inv);
            REQUIRE(lib.elements[i].height == ref[i].h);
        }
    }
}

TEST_CASE("build_filter is independent of the thread count")
{
    for (Int Q : {50, 333, 1000}) {
        const auto one = build_filter(Q, 1);
        const auto four = build_filter(Q, 4);
        REQUIRE(one.elements == four.elements);
    }
}

TEST_CASE("build_incremental small levels")
{
    CHECK(as_pairs(build_incremental(4)) == std::vector<std::pair<Int, Int>>{{1, 2}, {1, 1}});
    const auto d7 = level_delta(7);
    REQUIRE(d7.inserted.size() == 2);
    CHECK(d7.inserted[0] == Fraction::make(1, 5));
    CHECK(d7.inserted[1] == Fraction::make(2, 3));
}

TEST_CASE("incremental equals filter for Q <= 300")
{
    IncrementalBuilder b;
    for (Int Q = 3; Q <= 300; ++Q) {
        while (b.level() < Q)
            b.advance_count();
        REQUIRE(b.snapshot().elements == build_filter(Q).elements);
    }
}

TEST_CASE("level deltas")
{
    const auto d16 = level_delta(16);
    CHECK(std::find(d16.inserted.begin(), d16.inserted.end(), Fraction::make(5, 9)) != d16.inserted.end());
    const auto d20 = level_delta(20);
    CHECK(std::find(d20.inserted.begin(), d20.inserted.end(), Fraction::make(4, 9)) != d20.inserted.end());
    CHECK_THROWS_AS(level_delta(3), PreconditionError);

    IncrementalBuilder b;
    b.advance_count();  // level 4
    std::set<std::pair<Int, Int>> prev{{1, 2}, {1, 1}};
    while (b.level() < 300) {
        const LevelDelta d = b.advance();
        REQUIRE(static_cast<Int>(d.inserted.size()) == phi(d.Q));
        REQUIRE(d.inserted.size() == d.vanished_pairs.size());
        for (std::size_t i = 0; i < d.inserted.size(); ++i) {
            REQUIRE(mediant(d.vanished_pairs[i]) == d.inserted[i]);
            REQUIRE(height(d.inserted[i]).height == d.Q);
            if (i > 0)
                REQUIRE(d.inserted[i - 1] < d.inserted[i]);
        }
        // Nesting: the previous level survives.
        std::set<std::pair<Int, Int>> cur;
        for (const auto& e : b.snapshot().elements)
            cur.emplace(e.frac.num(), e.frac.den());
        for (const auto& p : prev)
            REQUIRE(cur.count(p) == 1);
        prev = std::move(cur);
    }
}

TEST_CASE("modular partition")
{
    CHECK(verify_modular_partition(build_filter(3)).ok);
    CHECK(verify_modular_partition(build_filter(5)).ok);
    for (Int Q = 3; Q <= 300; ++Q)
        REQUIRE(verify_modular_partition(build_filter(Q)).ok);

    auto broken = build_filter(40);
    broken.elements.erase(broken.elements.begin() + 7);
    const auto check = verify_modular_partition(broken);
    CHECK_FALSE(check.ok);
    REQUIRE(check.first_violation.has_value());
    CHECK(*check.first_violation == 7);
}

TEST_CASE("phi table")
{
    const std::vector<Int> expected{1, 1, 1, 1, 2, 1, 1, 4, 1, 1, 4, 2, 3, 4, 1, 4, 4, 5};
    const auto range = phi_range(3, 20);
    REQUIRE(range.size() == expected.size());
    Int s = 0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(range[i].Q == static_cast<Int>(i) + 3);
        CHECK(range[i].phi == expected[i]);
        CHECK(phi(range[i].Q) == expected[i]);
        s += expected[i];
        CHECK(range[i].S == s);
    }
    CHECK(phi(10) == 4);
    CHECK(phi(17) == 1);
    CHECK(phi(20) == 5);
}

TEST_CASE("phi agrees with set differences and stays positive")
{
    const auto range = phi_range(3, 300);
    for (const auto& e : range) {
        REQUIRE(e.phi >= 1);
        REQUIRE(e.S == static_cast<Int>(build_filter(e.Q).size()));
        if (e.Q <= 150)
            REQUIRE(e.phi == phi(e.Q));
    }
}

TEST_CASE("index sum")
{
    CHECK(index_sum(build_filter(3)) == 2);
    CHECK(index_sum(build_filter(20)) == 122);
    for (Int Q = 3; Q <= 300; ++Q) {
        const auto level = build_filter(Q);
        REQUIRE(index_sum(level) == 3 * static_cast<Int>(level.size()) - 1);
    }
    auto broken = build_filter(30);
    broken.elements.erase(broken.elements.begin() + 3);
    CHECK_THROWS_AS(index_sum(broken), InvariantError);
}

TEST_CASE("counting function")
{
    const auto l = build_filter(200);
    CHECK(count_interval(l, 0.0) == 0);
    CHECK(count_interval(l, 1.0) == static_cast<Int>(l.size()));
    const double zeta2 = std::numbers::pi * std::numbers::pi / 6.0;
    CHECK(predicted_count(100, 1.0) == doctest::Approx(1e4 / (2 * zeta2) * std::log(4.0 / 3.0)).epsilon(1e-14));
    CHECK_THROWS_AS(count_interval(l, 1.5), PreconditionError);
    CHECK_THROWS_AS(predicted_count(100, -0.1), PreconditionError);

    // Monotone in beta.
    Int prev = 0;
    for (int k = 0; k <= 100; ++k) {
        const Int c = count_interval(l, k / 100.0);
        REQUIRE(c >= prev);
        prev = c;
    }
}

TEST_CASE("asymmetry ratio")
{
    CHECK(asymmetry_ratio(build_filter(5)) == doctest::Approx(2.0 / 3.0));
    CHECK(asymmetry_ratio(build_filter(3)) == 0.0);
}

TEST_CASE("Farey containment and union coverage")
{
    for (Int Q = 1; Q <= 100; ++Q) {
        const auto level = build_filter(std::max<Int>(3, 3 * Q));
        std::set<std::pair<Int, Int>> have;
        for (const auto& e : level.elements)
            have.emplace(e.frac.num(), e.frac.den());
        for (const auto& f : oracle::farey_scan(Q))
            REQUIRE(have.count(f) == 1);
    }
    const auto l200 = build_filter(200);
    std::set<std::pair<Int, Int>> have;
    for (const auto& e : l200.elements)
        have.emplace(e.frac.num(), e.frac.den());
    for (const auto& f : oracle::farey_scan(50))
        REQUIRE(have.count(f) == 1);
}

TEST_CASE("first and last elements")
{
    for (Int Q = 4; Q <= 200; ++Q) {
        const auto l = build_filter(Q);
        REQUIRE(l.elements.front().frac == Fraction::make(1, Q - 2));
        REQUIRE(l.elements.back().frac == Fraction::make(1, 1));
    }
}
