#include "satfarey/core_fractions.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <utility>

namespace satfarey {

Int checked_mul(Int a, Int b)
{
    Int out = 0;
    if (__builtin_mul_overflow(a, b, &out))
        throw std::overflow_error("integer overflow in multiplication");
    return out;
}

Int checked_add(Int a, Int b)
{
    Int out = 0;
    if (__builtin_add_overflow(a, b, &out))
        throw std::overflow_error("integer overflow in addition");
    return out;
}

Fraction Fraction::make(Int num, Int den)
{
    if (den < 1 || num < 0 || num > den)
        throw PreconditionError("fraction must satisfy 0 <= num <= den, den >= 1");
    if (num == 0 && den != 1)
        throw PreconditionError("zero is only representable as 0/1");
    if (std::gcd(num, den) != 1)
        throw PreconditionError("fraction " + std::to_string(num) + "/" + std::to_string(den) +
                                " is not reduced");
    if (den > 4 * kMaxLevel)
        throw PreconditionError("denominator exceeds supported range");
    return Fraction(num, den);
}

std::string Fraction::str() const
{
    return std::to_string(num_) + "/" + std::to_string(den_);
}

UnimodularPair UnimodularPair::make(Fraction left, Fraction right)
{
    if (right.num() * left.den() - left.num() * right.den() != 1)
        throw PreconditionError("pair " + left.str() + ", " + right.str() + " is not unimodular");
    return UnimodularPair(left, right);
}

Int mod_inverse(Int a, Int q)
{
    if (q < 1 || a < 1 || a > q)
        throw PreconditionError("mod_inverse requires 1 <= a <= q");
    if (q == 1)
        return 1;
    // Track only the coefficient of a.
    Int r0 = q, r1 = a;
    Int s0 = 0, s1 = 1;
    while (r1 != 0) {
        const Int t = r0 / r1;
        r0 = std::exchange(r1, r0 - t * r1);
        s0 = std::exchange(s1, s0 - t * s1);
    }
    if (r0 != 1)
        throw PreconditionError("mod_inverse: gcd(" + std::to_string(a) + ", " + std::to_string(q) +
                                ") != 1");
    s0 %= q;
    return s0 < 0 ? s0 + q : s0;
}

HeightedFraction height(Fraction f)
{
    if (f.is_zero())
        throw PreconditionError("the virtual endpoint 0/1 has no height");
    const Int inv = mod_inverse(f.num(), f.den());
    return {f, inv, f.den() + f.num() + inv};
}

Fraction mediant(const UnimodularPair& p)
{
    return Fraction::make(p.left().num() + p.right().num(), p.left().den() + p.right().den());
}

namespace {

void expect_equal(Int formula, Int direct, const char* what, const UnimodularPair& p)
{
    if (formula != direct) {
        std::ostringstream os;
        os << what << " mismatch for pair " << p.left().str() << " < " << p.right().str()
           << ": formula " << formula << ", direct " << direct;
        throw InvariantError(os.str());
    }
}

Int exact_div(Int num, Int den, const char* what, const UnimodularPair& p)
{
    if (num % den != 0) {
        std::ostringstream os;
        os << what << " is not integral for pair " << p.left().str() << " < " << p.right().str();
        throw InvariantError(os.str());
    }
    return num / den;
}

}  // namespace

PairHeights heights_from_denominators(const UnimodularPair& p)
{
    const Fraction left = p.left();
    const Fraction right = p.right();
    if (left.is_zero())
        throw PreconditionError("heights_from_denominators needs a left fraction other than 0/1");

    const HeightedFraction d1 = height(left);
    const HeightedFraction d2 = height(right);
    const HeightedFraction dm = height(mediant(p));

    const Int q1 = left.den();
    const Int q2 = right.den();
    // q1 >= 2 always: the only fraction with denominator 1 is 1/1, which has
    // no right neighbour in (0,1].
    const Int inv_q2_mod_q1 = mod_inverse(q2 % q1, q1);
    const Int inv_q1_mod_q2 = q2 == 1 ? 1 : mod_inverse(q1 % q2, q2);

    PairHeights out{};

    out.inv_a1 = (1 + q2 / q1) * q1 - q2;
    expect_equal(out.inv_a1, d1.inv, "inverse of a1", p);

    out.a1 = q1 - inv_q2_mod_q1;
    expect_equal(out.a1, left.num(), "a1 = q1 - inv(q2)", p);
    expect_equal(exact_div(q1 * inv_q1_mod_q2 - 1, q2, "a1 quotient", p), left.num(),
                 "a1 = (q1 inv(q1) - 1)/q2", p);

    out.a2 = inv_q1_mod_q2;
    expect_equal(out.a2, right.num(), "a2 = inv(q1)", p);
    expect_equal(q2 - exact_div(q2 * inv_q2_mod_q1 - 1, q1, "a2 quotient", p), right.num(),
                 "a2 = q2 - (q2 inv(q2) - 1)/q1", p);

    out.h1 = (2 + q2 / q1) * q1 - q2 + exact_div(q1 * inv_q1_mod_q2 - 1, q2, "h1 quotient", p);
    expect_equal(out.h1, d1.height, "h1 (quotient form)", p);
    expect_equal((3 + q2 / q1) * q1 - q2 - inv_q2_mod_q1, d1.height, "h1 (inverse form)", p);

    if (q2 >= 2) {
        out.inv_a2 = q1 - (q1 / q2) * q2;
        expect_equal(out.inv_a2, d2.inv, "inverse of a2", p);

        out.h2 = (1 - q1 / q2) * q2 + q1 + inv_q1_mod_q2;
        expect_equal(out.h2, d2.height, "h2 (inverse form)", p);
        expect_equal(q1 + (2 - q1 / q2) * q2 - exact_div(q2 * inv_q2_mod_q1 - 1, q1, "h2 quotient", p),
                     d2.height, "h2 (quotient form)", p);
    } else {
        // right == 1/1: those formulas assume a2 < q2.
        out.inv_a2 = d2.inv;
        out.h2 = d2.height;
    }

    out.h_star = 3 * q1 + q2 + inv_q1_mod_q2 - inv_q2_mod_q1;
    expect_equal(out.h_star, dm.height, "mediant height", p);
    return out;
}

ConsecutiveRange consecutive_at(const UnimodularPair& p)
{
    if (p.left().is_zero())
        throw PreconditionError("consecutive_at needs a left fraction other than 0/1");
    const Int h1 = height(p.left()).height;
    const Int h2 = height(p.right()).height;
    const Int hm = height(mediant(p)).height;
    const ConsecutiveRange out{std::max(h1, h2), hm - 1};
    if (out.q_lo > out.q_hi)
        throw InvariantError("mediant height does not exceed both parent heights for " +
                             p.left().str() + " < " + p.right().str());
    return out;
}

}  // namespace satfarey
