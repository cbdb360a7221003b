#include "satfarey/box.hpp"

#include <charconv>
#include <numeric>
#include <vector>

namespace satfarey {

namespace {

Int parse_int(std::string_view s, std::string_view whole)
{
    Int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw PreconditionError("cannot parse rational '" + std::string(whole) + "'");
    return v;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    return s;
}

}  // namespace

Rational Rational::make(Int num, Int den)
{
    if (den <= 0 || num < 0)
        throw PreconditionError("rational must have num >= 0 and den > 0");
    const Int g = std::gcd(num, den);
    return {num / g, den / g};
}

Rational Rational::parse(std::string_view text)
{
    const std::string_view s = trim(text);
    if (s.find_first_of("+-") != std::string_view::npos)
        throw PreconditionError("rational must be written without a sign: '" + std::string(text) + "'");
    if (const auto slash = s.find('/'); slash != std::string_view::npos)
        return make(parse_int(trim(s.substr(0, slash)), text), parse_int(trim(s.substr(slash + 1)), text));

    const auto dot = s.find('.');
    if (dot == std::string_view::npos)
        return make(parse_int(s, text), 1);
    const std::string_view int_part = s.substr(0, dot);
    const std::string_view frac_part = s.substr(dot + 1);
    if (frac_part.size() > 12 || (int_part.empty() && frac_part.empty()))
        throw PreconditionError("cannot parse rational '" + std::string(text) + "'");
    Int den = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i)
        den *= 10;
    const Int whole = int_part.empty() ? 0 : parse_int(int_part, text);
    const Int frac = frac_part.empty() ? 0 : parse_int(frac_part, text);
    return make(checked_add(checked_mul(whole, den), frac), den);
}

std::string Rational::str() const
{
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

BoxRegion BoxRegion::make(Rational x0, Rational x1, Rational y0, Rational y1)
{
    const Rational one{1, 1};
    if (x1 < x0 || y1 < y0)
        throw PreconditionError("box corners out of order");
    if (one < x1 || one < y1)
        throw PreconditionError("box must lie inside the unit square");
    return {x0, x1, y0, y1};
}

BoxRegion BoxRegion::parse(std::string_view text)
{
    std::vector<Rational> parts;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        parts.push_back(Rational::parse(text.substr(start, comma - start)));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    if (parts.size() != 4)
        throw PreconditionError("box needs four comma-separated values x0,x1,y0,y1");
    return make(parts[0], parts[1], parts[2], parts[3]);
}

bool BoxRegion::contains(Int q1, Int q2, Int Q) const
{
    // n/d <= q/Q  <=>  n*Q <= q*d
    auto ge = [Q](Int q, const Rational& r) { return q * r.den >= r.num * Q; };
    auto le = [Q](Int q, const Rational& r) { return q * r.den <= r.num * Q; };
    return ge(q1, x0) && le(q1, x1) && ge(q2, y0) && le(q2, y1);
}

std::string BoxRegion::str() const
{
    return "[" + x0.str() + "," + x1.str() + "]x[" + y0.str() + "," + y1.str() + "]";
}

}  // namespace satfarey
