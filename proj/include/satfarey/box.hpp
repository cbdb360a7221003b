#pragma once

#include "satfarey/core_fractions.hpp"

#include <string>
#include <string_view>

namespace satfarey {

/// Non-negative rational used for box corners. Not necessarily in (0,1].
struct Rational {
    Int num = 0;
    Int den = 1;

    static Rational make(Int num, Int den);
    /// Parses "p/q", an integer, or a plain decimal such as "0.55" exactly.
    static Rational parse(std::string_view text);

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;

    friend bool operator==(const Rational& l, const Rational& r) { return l.num * r.den == r.num * l.den; }
    friend auto operator<=>(const Rational& l, const Rational& r) { return l.num * r.den <=> r.num * l.den; }
};

/// Closed axis-aligned box [x0, x1] x [y0, y1] inside the unit square.
struct BoxRegion {
    Rational x0, x1, y0, y1;

    static BoxRegion make(Rational x0, Rational x1, Rational y0, Rational y1);
    static BoxRegion parse(std::string_view text);  // "x0,x1,y0,y1"

    /// (q1/Q, q2/Q) in the closed box, decided in integers.
    bool contains(Int q1, Int q2, Int Q) const;
    double area() const { return (x1.value() - x0.value()) * (y1.value() - y0.value()); }
    std::string str() const;
};

}  // namespace satfarey
