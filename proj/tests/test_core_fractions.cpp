#include "doctest.h"

#include "oracles.hpp"
#include "satfarey/core_fractions.hpp"

#include <numeric>

using namespace satfarey;

TEST_CASE("mod_inverse small cases")
{
    CHECK(mod_inverse(5, 9) == oracle::inverse_scan(5, 9));
    CHECK(mod_inverse(5, 9) == 2);
    CHECK(mod_inverse(4, 9) == 7);
    for (Int q = 2; q <= 40; ++q)
        CHECK(mod_inverse(1, q) == 1);
    CHECK(mod_inverse(1, 1) == 1);
}

TEST_CASE("mod_inverse rejects bad input")
{
    CHECK_THROWS_AS(mod_inverse(6, 9), PreconditionError);
    CHECK_THROWS_AS(mod_inverse(0, 7), PreconditionError);
    CHECK_THROWS_AS(mod_inverse(8, 7), PreconditionError);
    CHECK_THROWS_AS(mod_inverse(3, 0), PreconditionError);
}

TEST_CASE("mod_inverse agrees with the scan for every coprime pair up to 300")
{
    for (Int q = 2; q <= 300; ++q)
        for (Int a = 1; a < q; ++a)
            if (std::gcd(a, q) == 1) {
                const Int inv = mod_inverse(a, q);
                REQUIRE(inv == oracle::inverse_scan(a, q));
                REQUIRE(a * inv % q == 1);
                REQUIRE(inv >= 1);
                REQUIRE(inv < q);
            }
}

TEST_CASE("Fraction validation and ordering")
{
    CHECK_THROWS_AS(Fraction::make(2, 4), PreconditionError);
    CHECK_THROWS_AS(Fraction::make(0, 3), PreconditionError);
    CHECK_THROWS_AS(Fraction::make(5, 3), PreconditionError);
    CHECK_THROWS_AS(Fraction::make(1, 0), PreconditionError);
    CHECK(Fraction::make(1, 3) < Fraction::make(1, 2));
    CHECK(Fraction::zero() < Fraction::make(1, 100));
    CHECK(Fraction::make(3, 5).str() == "3/5");
}

TEST_CASE("heights")
{
    CHECK(height(Fraction::make(5, 9)).height == 16);
    CHECK(height(Fraction::make(4, 9)).height == 20);
    CHECK(height(Fraction::make(1, 1)).height == 3);
    for (Int q = 2; q <= 50; ++q)
        CHECK(height(Fraction::make(1, q)).height == q + 2);
    CHECK_THROWS_AS(height(Fraction::zero()), PreconditionError);
}

TEST_CASE("reflection identity h(a/q) + h(1 - a/q) = 4q")
{
    for (Int q = 2; q <= 500; ++q)
        for (Int a = 1; a < q; ++a)
            if (std::gcd(a, q) == 1)
                REQUIRE(height(Fraction::make(a, q)).height + height(Fraction::make(q - a, q)).height == 4 * q);
}

TEST_CASE("mediants")
{
    const auto third = Fraction::make(1, 3);
    const auto half = Fraction::make(1, 2);
    CHECK(mediant(UnimodularPair::make(third, half)) == Fraction::make(2, 5));
    CHECK(mediant(UnimodularPair::make(Fraction::zero(), Fraction::make(1, 1))) == half);
    const auto m = mediant(UnimodularPair::make(third, Fraction::make(2, 5)));
    CHECK(m == Fraction::make(3, 8));
    CHECK(height(m).height == 14);
    CHECK(oracle::height_scan(3, 8) == 14);
    CHECK(height(third).height == 5);
    CHECK(height(Fraction::make(2, 5)).height == 10);
    CHECK_THROWS_AS(UnimodularPair::make(half, third), PreconditionError);
    CHECK_THROWS_AS(UnimodularPair::make(third, Fraction::make(3, 5)), PreconditionError);
}

TEST_CASE("heights_from_denominators worked examples")
{
    const auto p = heights_from_denominators(UnimodularPair::make(Fraction::make(1, 3), Fraction::make(2, 5)));
    CHECK(p.a1 == 1);
    CHECK(p.a2 == 2);
    CHECK(p.inv_a1 == 1);
    CHECK(p.inv_a2 == 3);
    CHECK(p.h1 == 5);
    CHECK(p.h2 == 10);
    CHECK(p.h_star == 14);

    const auto q = heights_from_denominators(UnimodularPair::make(Fraction::make(1, 2), Fraction::make(1, 1)));
    CHECK(q.h_star == 7);
    CHECK(q.h_star == oracle::height_scan(2, 3));

    CHECK_THROWS_AS(heights_from_denominators(UnimodularPair::make(Fraction::zero(), Fraction::make(1, 1))),
                    PreconditionError);
}

TEST_CASE("property: denominator formulas match the scan oracle on random pairs")
{
    auto g = oracle::rng(11);
    for (int i = 0; i < 3000; ++i) {
        const auto s = oracle::random_unimodular(g, 400);
        const auto p = heights_from_denominators(
            UnimodularPair::make(Fraction::make(s.a1, s.q1), Fraction::make(s.a2, s.q2)));
        REQUIRE(p.a1 == s.a1);
        REQUIRE(p.a2 == s.a2);
        REQUIRE(p.h1 == oracle::height_scan(s.a1, s.q1));
        REQUIRE(p.h2 == oracle::height_scan(s.a2, s.q2));
        REQUIRE(p.h_star == oracle::height_scan(s.a1 + s.a2, s.q1 + s.q2));
        // Mediant heights grow.
        REQUIRE(p.h_star > std::max(p.h1, p.h2));
        // Reflection of the left end.
        REQUIRE(p.h1 + oracle::height_scan(s.q1 - s.a1, s.q1) == 4 * s.q1);
    }
}

TEST_CASE("consecutive_at")
{
    const auto r1 = consecutive_at(UnimodularPair::make(Fraction::make(1, 3), Fraction::make(1, 2)));
    CHECK(r1.q_lo == 5);
    CHECK(r1.q_hi == 9);
    const auto r2 = consecutive_at(UnimodularPair::make(Fraction::make(1, 3), Fraction::make(2, 5)));
    CHECK(r2.q_lo == 10);
    CHECK(r2.q_hi == 13);

    auto g = oracle::rng(12);
    for (int i = 0; i < 2000; ++i) {
        const auto s = oracle::random_unimodular(g, 2000);
        const auto r = consecutive_at(UnimodularPair::make(Fraction::make(s.a1, s.q1), Fraction::make(s.a2, s.q2)));
        REQUIRE(r.q_lo <= r.q_hi);
    }
}

TEST_CASE("checked arithmetic")
{
    CHECK(checked_mul(1 << 20, 1 << 20) == Int{1} << 40);
    CHECK_THROWS(checked_mul(Int{1} << 40, Int{1} << 40));
    CHECK_THROWS(checked_add(INT64_MAX, 1));
}
