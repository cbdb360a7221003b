#include "satfarey/distribution.hpp"

#include "satfarey/format.hpp"
#include "satfarey/gap_geometry.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include "json.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace satfarey {

namespace {

const Polygon& cell_polygon(int cell)
{
    switch (cell) {
    case 1:
        return regions::v1();
    case 2:
        return regions::v2();
    case 3:
        return regions::v3();
    default:
        throw PreconditionError("cell index must be 1, 2 or 3, got " + std::to_string(cell));
    }
}

double h1(double x, double y) { return (1.0 + y - 2.0 * x) / x; }

double h2(double x, double y)
{
    const double k = std::floor(y / x);
    const double a = (1.0 + y - (2.0 + k) * x) / x;
    const double b = (1.0 - x - y) / y;
    const double c = (1.0 - 2.0 * x - y) / (x + y);
    return std::min({a, b, 1.0}) - std::max(c, 0.0);
}

double h3(double x, double y)
{
    const double m = std::floor(x / y);
    const double d = (3.0 * x + 2.0 * y - 1.0) / (x + y);
    const double e = (3.0 * x - y - 1.0) / x;
    const double f = (x + (2.0 - m) * y - 1.0) / y;
    return std::min(d, 1.0) - std::max({e, f, 0.0});
}

double raw_density(int cell, double x, double y)
{
    switch (cell) {
    case 1:
        return h1(x, y);
    case 2:
        return h2(x, y);
    default:
        return h3(x, y);
    }
}

// a x + b y + c >= 0
struct Line {
    double a, b, c;
};

void add_quadratic_roots(double p, double q, std::vector<double>& out)
{
    // y^2 + p y + q = 0
    const double disc = p * p - 4.0 * q;
    if (disc < 0.0)
        return;
    const double s = std::sqrt(disc);
    out.push_back((-p - s) / 2.0);
    out.push_back((-p + s) / 2.0);
}

// Places in (lo, hi) where the integrand, at fixed x, is not smooth in y.
// Two shortcuts keep the lists short: for x <= 1/3 the first term of the H2
// minimum is >= 1, so its floor never matters; for y <= 1/3 the floor term
// of the H3 maximum is <= 0.
void breakpoints(int cell, double x, double lo, double hi, std::vector<double>& out)
{
    out.clear();
    if (cell == 2) {
        out.push_back((1.0 - x) / 2.0);  // B = 1
        out.push_back(1.0 - 2.0 * x);    // C = 0
        if (x > 1.0 / 3.0) {
            const auto k_lo = static_cast<long>(std::floor(lo / x));
            const auto k_hi = static_cast<long>(std::floor(hi / x));
            for (long k = k_lo; k <= k_hi; ++k) {
                const double kd = static_cast<double>(k);
                out.push_back(kd * x);
                out.push_back((3.0 + kd) * x - 1.0);                                // A = 1
                add_quadratic_roots(1.0 - (1.0 + kd) * x, x * x - x, out);          // A = B
            }
        }
    } else if (cell == 3) {
        out.push_back(1.0 - 2.0 * x);  // D = 1
        out.push_back(3.0 * x - 1.0);  // E = 0
        out.push_back(1.0 / 3.0);
        const double from = std::max(lo, 1.0 / 3.0);
        if (hi > from) {
            const auto m_lo = static_cast<long>(std::floor(x / hi));
            const auto m_hi = static_cast<long>(std::floor(x / from));
            for (long m = std::max(1L, m_lo); m <= m_hi; ++m) {
                const double md = static_cast<double>(m);
                out.push_back(x / md);
                if (m != 2)
                    out.push_back((1.0 - x) / (2.0 - md));                           // F = 0
                add_quadratic_roots(1.0 - (1.0 + md) * x, x * x - x, out);          // E = F
            }
            if (m_lo == 0)
                out.push_back(x);
        }
    }
    std::erase_if(out, [&](double t) { return !(t > lo && t < hi) || !std::isfinite(t); });
    std::sort(out.begin(), out.end());
}

class RegionIntegrator {
public:
    RegionIntegrator(int cell, std::vector<Line> lines, const QuadratureOptions& opts)
        : cell_(cell), lines_(std::move(lines)), opts_(opts)
    {
    }

    double integrate()
    {
        std::vector<double> xs = vertex_abscissae();
        if (xs.size() < 2 || xs.back() - xs.front() <= 0.0)
            return 0.0;
        // x = 1/3 switches the H2 shortcut.
        if (cell_ == 2 && xs.front() < 1.0 / 3.0 && xs.back() > 1.0 / 3.0)
            xs.push_back(1.0 / 3.0);
        std::sort(xs.begin(), xs.end());
        width_ = xs.back() - xs.front();
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < xs.size(); ++i)
            if (xs[i + 1] > xs[i])
                total += adapt(xs[i], xs[i + 1], 0);
        return total;
    }

private:
    std::vector<double> vertex_abscissae() const
    {
        std::vector<double> xs;
        for (std::size_t i = 0; i < lines_.size(); ++i) {
            for (std::size_t j = i + 1; j < lines_.size(); ++j) {
                const Line& p = lines_[i];
                const Line& q = lines_[j];
                const double det = p.a * q.b - p.b * q.a;
                if (det == 0.0)
                    continue;
                const double x = (p.b * q.c - p.c * q.b) / det;
                const double y = (p.c * q.a - p.a * q.c) / det;
                const bool feasible = std::all_of(lines_.begin(), lines_.end(), [&](const Line& l) {
                    return l.a * x + l.b * y + l.c >= -1e-12;
                });
                if (feasible)
                    xs.push_back(x);
            }
        }
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        return xs;
    }

    double inner(double x)
    {
        double lo = -1e300, hi = 1e300;
        for (const Line& l : lines_) {
            if (l.b > 0.0)
                lo = std::max(lo, -(l.a * x + l.c) / l.b);
            else if (l.b < 0.0)
                hi = std::min(hi, -(l.a * x + l.c) / l.b);
        }
        if (!(hi > lo))
            return 0.0;
        if (cell_ == 1)
            return ((1.0 - 2.0 * x) * (hi - lo) + (hi * hi - lo * lo) / 2.0) / x;

        breakpoints(cell_, x, lo, hi, cuts_);
        double sum = 0.0;
        double a = lo;
        auto f = [&](double y) { return raw_density(cell_, x, y); };
        for (std::size_t i = 0; i <= cuts_.size(); ++i) {
            const double b = i < cuts_.size() ? cuts_[i] : hi;
            if (b > a)
                sum += boost::math::quadrature::gauss<double, 20>::integrate(f, a, b);
            a = b;
        }
        return sum;
    }

    double adapt(double a, double b, int depth)
    {
        if (++panels_ > opts_.max_panels)
            throw QuadratureError("quadrature exceeded its panel budget");
        double err = 0.0;
        auto g = [this](double x) { return inner(x); };
        const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, a, b, 0, 0.0, &err);
        if (err <= opts_.abs_tol * (b - a) / width_ || err < 1e-15)
            return value;
        if (depth >= opts_.max_depth)
            throw QuadratureError("quadrature tolerance not reached at depth " + std::to_string(depth));
        const double mid = 0.5 * (a + b);
        return adapt(a, mid, depth + 1) + adapt(mid, b, depth + 1);
    }

    int cell_;
    std::vector<Line> lines_;
    QuadratureOptions opts_;
    double width_ = 1.0;
    int panels_ = 0;
    std::vector<double> cuts_;
};

std::vector<Line> polygon_lines(const Polygon& p)
{
    std::vector<Line> out;
    for (const HalfPlane& h : p.constraints)
        out.push_back({static_cast<double>(h.cx), static_cast<double>(h.cy), static_cast<double>(h.c0)});
    return out;
}

Rational midpoint(const Rational& a, const Rational& b)
{
    return Rational::make(checked_add(checked_mul(a.num, b.den), checked_mul(b.num, a.den)),
                          checked_mul(2, checked_mul(a.den, b.den)));
}

bool box_in_cell(const BoxRegion& box, const Polygon& p)
{
    const std::array<Rational, 3> xs{box.x0, midpoint(box.x0, box.x1), box.x1};
    const std::array<Rational, 3> ys{box.y0, midpoint(box.y0, box.y1), box.y1};
    for (const Rational& x : xs)
        for (const Rational& y : ys)
            if (!p.contains(x, y))
                return false;
    return true;
}

}  // namespace

double density_eval(int cell, double x, double y)
{
    cell_polygon(cell);
    if (!std::isfinite(x) || !std::isfinite(y))
        throw PreconditionError("density_eval needs finite coordinates");
    if (x <= 0.0)
        throw PreconditionError("H" + std::to_string(cell) + " divides by x; x must be > 0");
    if (cell != 1 && y <= 0.0)
        throw PreconditionError("H" + std::to_string(cell) + " divides by y; y must be > 0");
    return raw_density(cell, x, y);
}

std::optional<int> cell_of_box(const BoxRegion& box)
{
    for (int cell = 1; cell <= 3; ++cell)
        if (box_in_cell(box, cell_polygon(cell)))
            return cell;
    return std::nullopt;
}

double integrate_density(int cell, const BoxRegion& box, const QuadratureOptions& opts)
{
    const Polygon& p = cell_polygon(cell);
    if (box.x0.num == 0)
        throw PreconditionError("integrate_density needs box.x0 > 0");
    if (cell != 1 && box.y0.num == 0)
        throw PreconditionError("integrate_density needs box.y0 > 0 for H2 and H3");
    if (!box_in_cell(box, p))
        throw PreconditionError("box " + box.str() + " is not inside the closure of V" + std::to_string(cell));
    if (box.x0 == box.x1 || box.y0 == box.y1)
        return 0.0;
    std::vector<Line> lines{{1.0, 0.0, -box.x0.value()},
                            {-1.0, 0.0, box.x1.value()},
                            {0.0, 1.0, -box.y0.value()},
                            {0.0, -1.0, box.y1.value()}};
    return RegionIntegrator(cell, std::move(lines), opts).integrate();
}

double cell_mass(int cell, const QuadratureOptions& opts)
{
    return RegionIntegrator(cell, polygon_lines(cell_polygon(cell)), opts).integrate();
}

CellMasses cell_masses(const QuadratureOptions& opts)
{
    return {cell_mass(1, opts), cell_mass(2, opts), cell_mass(3, opts)};
}

double total_mass(const QuadratureOptions& opts) { return cell_masses(opts).total(); }

double empirical_box_fraction(const SaturatedLevel& level, const BoxRegion& box)
{
    if (level.Q < 4 || level.elements.size() < 2)
        throw PreconditionError("empirical_box_fraction needs Q >= 4");
    const auto& e = level.elements;
    Int hits = 0;
    for (std::size_t i = 0; i + 1 < e.size(); ++i)
        if (box.contains(e[i].frac.den(), e[i + 1].frac.den(), level.Q))
            ++hits;
    return static_cast<double>(hits) / static_cast<double>(e.size() - 1);
}

double empirical_box_fraction(Int Q, const BoxRegion& box)
{
    if (Q < 4)
        throw PreconditionError("empirical_box_fraction needs Q >= 4");
    return empirical_box_fraction(build_filter(Q), box);
}

DensityReport density_report(const SaturatedLevel& level, const std::vector<BoxRegion>& boxes,
                             const QuadratureOptions& opts)
{
    if (boxes.size() < 2)
        throw PreconditionError("density_report needs at least two boxes to fit a constant");
    DensityReport report;
    report.Q = level.Q;
    double num = 0.0, den = 0.0;
    for (const BoxRegion& box : boxes) {
        const auto cell = cell_of_box(box);
        if (!cell)
            throw PreconditionError("box " + box.str() + " is not inside a single cell of V");
        DensityEntry e{box, *cell, empirical_box_fraction(level, box), integrate_density(*cell, box, opts), 0.0};
        e.ratio = e.theoretical > 0.0 ? e.empirical / e.theoretical : 0.0;
        num += e.empirical * e.theoretical;
        den += e.theoretical * e.theoretical;
        report.entries.push_back(e);
    }
    if (den <= 0.0)
        throw PreconditionError("every box has zero theoretical mass; constant unfittable");
    report.fitted_constant = num / den;
    return report;
}

DensityReport density_report(Int Q, const std::vector<BoxRegion>& boxes, const QuadratureOptions& opts,
                             unsigned threads)
{
    if (Q < 4)
        throw PreconditionError("density_report needs Q >= 4");
    if (boxes.size() < 2)
        throw PreconditionError("density_report needs at least two boxes to fit a constant");
    return density_report(build_filter(Q, threads), boxes, opts);
}

std::string to_json(const DensityReport& report)
{
    nlohmann::ordered_json j;
    j["q"] = report.Q;
    j["fitted_constant"] = round12(report.fitted_constant);
    auto entries = nlohmann::ordered_json::array();
    for (const DensityEntry& e : report.entries) {
        nlohmann::ordered_json row;
        row["box"] = {round12(e.box.x0.value()), round12(e.box.x1.value()), round12(e.box.y0.value()),
                      round12(e.box.y1.value())};
        row["cell"] = e.cell;
        row["empirical"] = round12(e.empirical);
        row["theoretical"] = round12(e.theoretical);
        row["ratio"] = round12(e.ratio);
        entries.push_back(row);
    }
    j["entries"] = entries;
    return j.dump(2) + "\n";
}

std::vector<BoxRegion> boxes_from_json(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw PreconditionError(std::string("box file is not valid JSON: ") + e.what());
    }
    if (j.is_object() && j.contains("boxes"))
        j = j["boxes"];
    if (!j.is_array())
        throw PreconditionError("box file must hold a JSON array of boxes");
    auto as_rational = [](const nlohmann::json& v) {
        if (v.is_string())
            return Rational::parse(v.get<std::string>());
        if (v.is_number())
            return Rational::parse(v.dump());
        throw PreconditionError("box coordinate must be a number or a string");
    };
    std::vector<BoxRegion> out;
    for (const auto& b : j) {
        if (b.is_string()) {
            out.push_back(BoxRegion::parse(b.get<std::string>()));
        } else if (b.is_array() && b.size() == 4) {
            out.push_back(BoxRegion::make(as_rational(b[0]), as_rational(b[1]), as_rational(b[2]), as_rational(b[3])));
        } else {
            throw PreconditionError("each box must be [x0,x1,y0,y1] or \"x0,x1,y0,y1\"");
        }
    }
    return out;
}

}  // namespace satfarey
