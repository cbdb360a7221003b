#pragma once

// Exact arithmetic on reduced fractions in (0,1]: modular inverses, heights
// h(a/q) = q + a + inv(a mod q), mediants, and the closed-form height and
// inverse formulas available for a unimodular pair from its denominators.

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace satfarey {

using Int = std::int64_t;

/// Largest level the library accepts. Keeps every intermediate product
/// (at most ~4 Q^2) far inside 64-bit range.
inline constexpr Int kMaxLevel = 100000;

class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a derived identity disagrees with its direct computation.
/// Always an implementation bug or a broken invariant of the data.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

Int checked_mul(Int a, Int b);
Int checked_add(Int a, Int b);

/// Reduced fraction num/den with 1 <= num <= den. The single exception is
/// the virtual endpoint 0/1 (see Fraction::zero), which never has a height.
class Fraction {
public:
    static Fraction make(Int num, Int den);
    static constexpr Fraction zero() { return Fraction(0, 1); }

    constexpr Int num() const { return num_; }
    constexpr Int den() const { return den_; }
    constexpr bool is_zero() const { return num_ == 0; }
    double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    std::string str() const;

    friend constexpr bool operator==(Fraction, Fraction) = default;
    friend constexpr std::strong_ordering operator<=>(Fraction l, Fraction r)
    {
        return l.num_ * r.den_ <=> r.num_ * l.den_;
    }

private:
    constexpr Fraction(Int n, Int d) : num_(n), den_(d) {}
    Int num_;
    Int den_;
};

struct HeightedFraction {
    Fraction frac;
    Int inv;     // inverse of num mod den in [1, den); 1 when den == 1
    Int height;  // den + num + inv

    friend bool operator==(const HeightedFraction&, const HeightedFraction&) = default;
};

/// left < right with right.num*left.den - left.num*right.den == 1.
class UnimodularPair {
public:
    static UnimodularPair make(Fraction left, Fraction right);

    Fraction left() const { return left_; }
    Fraction right() const { return right_; }

    friend bool operator==(const UnimodularPair&, const UnimodularPair&) = default;

private:
    UnimodularPair(Fraction l, Fraction r) : left_(l), right_(r) {}
    Fraction left_;
    Fraction right_;
};

/// Inverse of a modulo q in [1, q) via extended Euclid; 1 when q == 1.
Int mod_inverse(Int a, Int q);

HeightedFraction height(Fraction f);

Fraction mediant(const UnimodularPair& p);

/// Heights and inverses of a unimodular pair, each computed from (q1, q2)
/// alone and cross-checked against the direct definitions.
struct PairHeights {
    Int a1;
    Int a2;
    Int inv_a1;   // inverse of a1 mod q1
    Int inv_a2;   // inverse of a2 mod q2
    Int h1;
    Int h2;
    Int h_star;   // height of the mediant
};

/// Throws InvariantError if any denominator-only formula disagrees with
/// mod_inverse/height. The left fraction must not be 0/1. Formulas that
/// need 0 < a2 < q2 are only evaluated when q2 >= 2.
PairHeights heights_from_denominators(const UnimodularPair& p);

/// The pair is consecutive in the saturated level Q exactly for
/// q_lo <= Q <= q_hi.
struct ConsecutiveRange {
    Int q_lo;
    Int q_hi;
};

ConsecutiveRange consecutive_at(const UnimodularPair& p);

}  // namespace satfarey
