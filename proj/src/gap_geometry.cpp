#include "satfarey/gap_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace satfarey {

// ---------------------------------------------------------------------------
// Polygons

bool Polygon::contains(Int q1, Int q2, Int Q) const
{
    for (const HalfPlane& h : constraints)
        if (h.cx * q1 + h.cy * q2 + h.c0 * Q < 0)
            return false;
    return true;
}

bool Polygon::contains(const Rational& x, const Rational& y) const
{
    // Scale by x.den * y.den so every term is integral.
    const Int d = checked_mul(x.den, y.den);
    for (const HalfPlane& h : constraints) {
        const Int lhs = checked_add(checked_add(checked_mul(h.cx, checked_mul(x.num, y.den)),
                                                checked_mul(h.cy, checked_mul(y.num, x.den))),
                                    checked_mul(h.c0, d));
        if (lhs < 0)
            return false;
    }
    return true;
}

bool Polygon::contains(double x, double y) const
{
    for (const HalfPlane& h : constraints)
        if (static_cast<double>(h.cx) * x + static_cast<double>(h.cy) * y + static_cast<double>(h.c0) < 0.0)
            return false;
    return true;
}

namespace regions {

namespace {

BoxRegion box(Int x0n, Int x0d, Int x1n, Int x1d, Int y0n, Int y0d, Int y1n, Int y1d)
{
    return BoxRegion::make(Rational::make(x0n, x0d), Rational::make(x1n, x1d), Rational::make(y0n, y0d),
                           Rational::make(y1n, y1d));
}

std::vector<HalfPlane> in_square(std::initializer_list<HalfPlane> extra)
{
    std::vector<HalfPlane> out{{1, 0, 0}, {-1, 0, 1}, {0, 1, 0}, {0, -1, 1}};
    out.insert(out.end(), extra);
    return out;
}

std::vector<Polygon> make_all()
{
    const std::vector<HalfPlane> v1_constraints{
        {2, 0, -1}, {-1, 0, 1}, {0, 3, -1}, {0, -1, 1},  // [1/2,1] x [1/3,1]
        {1, 1, -1},                                      // y >= 1 - x
        {-2, 1, 1},                                      // y >= 2x - 1
        {1, -1, 0},                                      // y <= x
    };
    std::vector<Polygon> out;
    out.push_back({"V1", v1_constraints, box(1, 2, 1, 1, 1, 3, 1, 1)});
    out.push_back({"V2",
                   {
                       {1, 0, 0}, {-2, 0, 1}, {0, 5, -1}, {0, -1, 1},  // [0,1/2] x [1/5,1]
                       {3, 2, -1},                                     // y >= (1-3x)/2
                       {-1, 1, 0},                                     // y >= x
                       {-1, -1, 1},                                    // y <= 1 - x
                   },
                   box(0, 1, 1, 2, 1, 5, 1, 1)});
    out.push_back({"V3",
                   {
                       {5, 0, -1}, {-3, 0, 2}, {0, 1, 0}, {0, -2, 1},  // [1/5,2/3] x [0,1/2]
                       {3, 2, -1},                                     // y >= (1-3x)/2
                       {-2, 1, 1},                                     // y >= 2x - 1
                       {1, -1, 0},                                     // y <= x
                       {-1, -1, 1},                                    // y <= 1 - x
                   },
                   box(1, 5, 2, 3, 0, 1, 1, 2)});
    out.push_back({"W1", v1_constraints, box(1, 2, 1, 1, 1, 3, 1, 1)});
    out.push_back({"W2", in_square({{2, 1, -1}, {1, 2, -1}, {-2, 1, 1}, {-1, -1, 1}}), box(0, 1, 2, 3, 1, 5, 1, 1)});
    out.push_back({"W3_1", in_square({{2, 1, -1}, {1, 3, -1}, {-2, 1, 1}, {-1, -2, 1}}), box(1, 3, 3, 5, 1, 7, 1, 3)});
    out.push_back({"W3_2", in_square({{3, 1, -1}, {1, 2, -1}, {-2, -1, 1}}), box(0, 1, 1, 3, 1, 3, 1, 1)});
    out.push_back({"W4_1", in_square({{2, 1, -1}, {1, 4, -1}, {-2, 1, 1}, {-1, -3, 1}}), box(2, 5, 4, 7, 1, 9, 1, 5)});
    out.push_back({"W4_2", in_square({{3, 1, -1}, {1, 3, -1}, {-1, -2, 1}, {-2, -1, 1}}), box(1, 5, 2, 5, 1, 5, 2, 5)});
    out.push_back({"W4_3", in_square({{4, 1, -1}, {1, 2, -1}, {-3, -1, 1}}), box(0, 1, 1, 5, 2, 5, 1, 1)});
    out.push_back({"W5_1", in_square({{2, 1, -1}, {1, 5, -1}, {-2, 1, 1}, {-1, -4, 1}}), box(3, 7, 5, 9, 1, 11, 1, 7)});
    out.push_back({"W5_2", in_square({{3, 1, -1}, {1, 4, -1}, {-1, -3, 1}, {-2, -1, 1}}), box(1, 4, 3, 7, 1, 7, 1, 4)});
    out.push_back({"W5_3", in_square({{4, 1, -1}, {1, 3, -1}, {-1, -2, 1}, {-3, -1, 1}}), box(1, 7, 1, 4, 1, 4, 3, 7)});
    out.push_back({"W5_4", in_square({{5, 1, -1}, {1, 2, -1}, {-4, -1, 1}}), box(0, 1, 1, 7, 3, 7, 1, 1)});
    out.push_back({"W9_4",
                   in_square({
                       {4, 1, -1},    // y >= 1 - 4x
                       {3, 2, -1},    // y >= (1-3x)/2
                       {2, 5, -1},    // y >= (1-2x)/5
                       {1, 6, -1},    // y >= (1-x)/6
                       {-3, -1, 1},   // y <= 1 - 3x
                       {-2, -3, 1},   // y <= (1-2x)/3
                       {-1, -5, 1},   // y <= (1-x)/5
                   }),
                   box(3, 13, 5, 17, 2, 17, 2, 13)});
    return out;
}

}  // namespace

const std::vector<Polygon>& all()
{
    static const std::vector<Polygon> polygons = make_all();
    return polygons;
}

const Polygon* find(std::string_view name)
{
    for (const Polygon& p : all())
        if (p.name == name)
            return &p;
    return nullptr;
}

const Polygon& v1() { return all()[0]; }
const Polygon& v2() { return all()[1]; }
const Polygon& v3() { return all()[2]; }

}  // namespace regions

bool in_v(Int q1, Int q2, Int Q)
{
    if (q1 < 0 || q2 < 0 || q1 > Q || q2 > Q)
        return false;
    const bool lower = 2 * q2 >= Q - 3 * q1 && q2 >= 2 * q1 - Q;
    const bool upper = q2 <= q1 || q2 <= Q - q1;
    return lower && upper;
}

std::string RegionLabel::cell() const
{
    switch (cell_count()) {
    case 0:
        return "outside";
    case 1:
        return in_v1 ? "V1" : in_v2 ? "V2" : "V3";
    default:
        return "boundary";
    }
}

RegionLabel region_of(Int q1, Int q2, Int Q)
{
    if (Q < 3 || q1 < 1 || q2 < 1)
        throw PreconditionError("region_of needs q1, q2 >= 1 and Q >= 3");
    if (Q > 1000 * kMaxLevel)
        throw PreconditionError("region_of: Q out of range");
    RegionLabel out;
    out.in_v = in_v(q1, q2, Q);
    out.in_v1 = regions::v1().contains(q1, q2, Q);
    out.in_v2 = regions::v2().contains(q1, q2, Q);
    out.in_v3 = regions::v3().contains(q1, q2, Q);
    return out;
}

// ---------------------------------------------------------------------------
// Gap chains

GapView GapScanner::scan(Int a1, Int q1, Int a2, Int q2, Int Q)
{
    nums_.clear();
    dens_.clear();
    sig_.clear();
    nums_.push_back(a1);
    dens_.push_back(q1);

    const Int k = (Q - q2) / q1;
    if (k > 0) {
        nums_.push_back(a2 + k * a1);
        dens_.push_back(q2 + k * q1);
        while (dens_.back() != q2 || nums_.back() != a2) {
            const std::size_t n = dens_.size();
            const Int prev_q = dens_[n - 2], cur_q = dens_[n - 1];
            const Int prev_a = nums_[n - 2], cur_a = nums_[n - 1];
            const Int nu = (Q + prev_q) / cur_q;
            sig_.push_back(nu);
            nums_.push_back(nu * cur_a - prev_a);
            dens_.push_back(nu * cur_q - prev_q);
            // Farey successors increase, so passing a2/q2 means it was never reached.
            if (dens_.back() < 1 || checked_mul(nums_.back(), q2) > checked_mul(a2, dens_.back()))
                throw InvariantError("Farey chain escaped its gap");
        }
    } else {
        nums_.push_back(a2);
        dens_.push_back(q2);
    }

    GapView v;
    v.Q = Q;
    v.nums = nums_;
    v.dens = dens_;
    v.r = static_cast<int>(dens_.size()) - 1;
    v.signature = sig_;
    if (v.r >= 2) {
        const Int target = q1 + q2;
        for (int i = 2; i <= v.r; ++i) {
            if (dens_[static_cast<std::size_t>(i - 1)] == target) {
                if (v.mediant_hits == 0)
                    v.mediant_pos = i;
                ++v.mediant_hits;
            }
        }
        const Int dk = dens_[1] - q2;
        const Int dn = dens_[static_cast<std::size_t>(v.r - 1)] - q1;
        v.k_nu_integral = dk % q1 == 0 && dn % q2 == 0;
        v.K = dk / q1;
        v.nu = dn / q2;
    }
    return v;
}

GapRecord GapRecord::from_view(const GapView& v)
{
    GapRecord g;
    g.Q = v.Q;
    g.chain.assign(v.dens.begin(), v.dens.end());
    for (std::size_t i = 0; i < v.dens.size(); ++i)
        g.fractions.push_back(Fraction::make(v.nums[i], v.dens[i]));
    g.r = v.r;
    g.signature.assign(v.signature.begin(), v.signature.end());
    if (v.r >= 2) {
        if (v.mediant_pos > 0)
            g.mediant_pos = v.mediant_pos;
        if (v.k_nu_integral) {
            g.K = v.K;
            g.nu = v.nu;
        }
    }
    return g;
}

std::vector<GapRecord> gap_records(const SaturatedLevel& level)
{
    if (level.Q < 4)
        throw PreconditionError("gap_records needs Q >= 4");
    std::vector<GapRecord> out;
    out.reserve(level.size());
    GapScanner scanner;
    for (std::size_t i = 0; i + 1 < level.elements.size(); ++i) {
        const Fraction l = level.elements[i].frac;
        const Fraction r = level.elements[i + 1].frac;
        out.push_back(GapRecord::from_view(scanner.scan(l.num(), l.den(), r.num(), r.den(), level.Q)));
    }
    return out;
}

std::vector<GapRecord> gap_records(Int Q)
{
    if (Q < 4)
        throw PreconditionError("gap_records needs Q >= 4");
    return gap_records(build_filter(Q));
}

Int continuant(std::span<const Int> values)
{
    Int prev = 0, cur = 1;  // K_{-1}, K_0
    for (Int x : values) {
        const Int next = checked_add(checked_mul(x, cur), -prev);
        prev = cur;
        cur = next;
    }
    return cur;
}

KNu extract_K_nu(const GapRecord& g)
{
    if (g.r < 2 || g.chain.size() != static_cast<std::size_t>(g.r) + 1)
        throw PreconditionError("extract_K_nu needs a gap record with r >= 2");
    const Int q1 = g.chain.front();
    const Int q_last = g.chain.back();
    const Int q2 = g.chain[1];
    const Int q_r = g.chain[static_cast<std::size_t>(g.r) - 1];
    if ((q2 - q_last) % q1 != 0 || (q_r - q1) % q_last != 0)
        throw InvariantError("K or nu is not an integer for gap at Q = " + std::to_string(g.Q));
    const KNu out{(q2 - q_last) / q1, (q_r - q1) / q_last};
    if (out.K < 1 || out.nu < 1)
        throw InvariantError("K or nu is not positive for gap at Q = " + std::to_string(g.Q));
    return out;
}

// ---------------------------------------------------------------------------
// W cells

namespace {

struct CellRule {
    int r;
    int pos;
    const char* name;
    std::vector<Int> signature;  // empty: not pinned
};

const std::vector<CellRule>& cell_rules()
{
    static const std::vector<CellRule> rules{
        {2, 2, "W2", {1}},
        {3, 2, "W3_1", {2, 1}},
        {3, 3, "W3_2", {1, 2}},
        {4, 2, "W4_1", {2, 2, 1}},
        {4, 3, "W4_2", {1, 3, 1}},
        {4, 4, "W4_3", {1, 2, 2}},
        {5, 2, "W5_1", {2, 2, 2, 1}},
        {5, 3, "W5_2", {1, 3, 2, 1}},
        {5, 4, "W5_3", {1, 2, 3, 1}},
        {5, 5, "W5_4", {1, 2, 2, 2}},
        {9, 4, "W9_4", {}},
    };
    return rules;
}

struct ResolvedCell {
    const CellRule* rule;
    const Polygon* polygon;
};

const ResolvedCell* resolve(int r, int pos)
{
    static const std::vector<ResolvedCell> resolved = [] {
        std::vector<ResolvedCell> out;
        for (const CellRule& s : cell_rules())
            out.push_back({&s, regions::find(s.name)});
        return out;
    }();
    for (const ResolvedCell& c : resolved)
        if (c.rule->r == r && c.rule->pos == pos)
            return &c;
    return nullptr;
}

struct CellCheck {
    const CellRule* rule = nullptr;
    const Polygon* polygon = nullptr;
    bool inside = true;
    bool signature_ok = true;
};

CellCheck check_cell(const GapView& g)
{
    static const Polygon* const w1 = regions::find("W1");
    CellCheck out;
    if (g.r == 1) {
        out.polygon = w1;
    } else if (const ResolvedCell* c = resolve(g.r, g.mediant_pos)) {
        out.rule = c->rule;
        out.polygon = c->polygon;
        if (!c->rule->signature.empty())
            out.signature_ok = std::equal(g.signature.begin(), g.signature.end(), c->rule->signature.begin(),
                                          c->rule->signature.end());
    } else {
        // Every admissible signature for r <= 5 has a cell above.
        out.signature_ok = g.r > 5;
    }
    if (out.polygon)
        out.inside = out.polygon->contains(g.q_first(), g.q_last(), g.Q);
    return out;
}

std::string cell_label(const GapView& g, const CellCheck& c)
{
    if (g.r == 1)
        return "W1";
    if (c.rule)
        return c.rule->name;
    return "r" + std::to_string(g.r) + "_i" + std::to_string(g.mediant_pos);
}

}  // namespace

WCell wcell_of(const GapView& g)
{
    const CellCheck c = check_cell(g);
    WCell out;
    out.r = g.r;
    out.mediant_pos = g.mediant_pos;
    out.label = cell_label(g, c);
    out.polygon = c.polygon;
    out.inside = c.inside;
    out.signature_ok = c.signature_ok;
    if (c.rule && !c.rule->signature.empty())
        out.expected_signature = c.rule->signature;
    return out;
}

WCell wcell_of(const GapRecord& g)
{
    std::vector<Int> nums;
    for (const Fraction& f : g.fractions)
        nums.push_back(f.num());
    GapView v;
    v.Q = g.Q;
    v.nums = nums;
    v.dens = g.chain;
    v.r = g.r;
    v.signature = g.signature;
    v.mediant_pos = g.mediant_pos.value_or(0);
    WCell out = wcell_of(v);
    return out;
}

// ---------------------------------------------------------------------------
// Audits

void GapAudit::note(const GapView& g, const std::string& what)
{
    if (diagnostics.size() >= 20)
        return;
    std::ostringstream os;
    os << "Q=" << g.Q << " gap " << g.nums.front() << "/" << g.dens.front() << " < " << g.nums.back() << "/"
       << g.dens.back() << " (r=" << g.r << "): " << what;
    diagnostics.push_back(os.str());
}

void GapAudit::add(const GapView& g)
{
    ++gaps;
    max_r = std::max<Int>(max_r, g.r);
    const Int Q = g.Q;
    const Int q1 = g.q_first();
    const Int ql = g.q_last();
    static const Polygon& v1 = regions::v1();
    static const Polygon& v2 = regions::v2();
    static const Polygon& v3 = regions::v3();
    RegionLabel region;
    region.in_v = in_v(q1, ql, Q);
    region.in_v1 = v1.contains(q1, ql, Q);
    region.in_v2 = v2.contains(q1, ql, Q);
    region.in_v3 = v3.contains(q1, ql, Q);

    bool included = region.in_v;
    if (g.r == 1)
        included = included && ql < q1 && ql > 2 * q1 - Q && ql > Q - q1 && region.in_v1;
    else
        included = included && q1 + ql <= Q && 3 * q1 + 2 * ql > Q && ql - 2 * q1 + Q >= 0 &&
                   (region.in_v2 || region.in_v3);
    if (!included) {
        ++inclusion_violations;
        note(g, "region inclusion fails (cell " + region.cell() + ")");
    }

    Int k = 0;
    try {
        k = continuant(g.signature);
    } catch (const std::overflow_error&) {
        k = 0;
    }
    if (k != 1) {
        ++continuant_violations;
        note(g, "continuant of signature is " + std::to_string(k));
    }

    if (g.r >= 2) {
        if (g.mediant_hits != 1) {
            ++mediant_violations;
            note(g, "mediant denominator attained " + std::to_string(g.mediant_hits) + " times");
        }
        if (!g.k_nu_integral || g.K < 1 || g.nu < 1) {
            ++k_nu_violations;
            note(g, "(K, nu) not positive integers");
        }
    }

    const CellCheck cell = check_cell(g);
    if (!cell.inside) {
        ++wcell_violations;
        note(g, "outside polygon " + cell_label(g, cell));
    }
    if (!cell.signature_ok) {
        ++signature_violations;
        note(g, "inadmissible signature for cell " + cell_label(g, cell));
    }

    if (g.r < kMaxTracked && g.mediant_pos < kMaxTracked)
        ++counts[static_cast<std::size_t>(g.r * kMaxTracked + g.mediant_pos)];
}

Int GapAudit::count(int r, int pos) const
{
    if (r < 0 || pos < 0 || r >= kMaxTracked || pos >= kMaxTracked)
        return 0;
    return counts[static_cast<std::size_t>(r * kMaxTracked + pos)];
}

GapAudit audit_level(const SaturatedLevel& level)
{
    GapAudit audit;
    GapScanner scanner;
    for (std::size_t i = 0; i + 1 < level.elements.size(); ++i) {
        const Fraction l = level.elements[i].frac;
        const Fraction r = level.elements[i + 1].frac;
        audit.add(scanner.scan(l.num(), l.den(), r.num(), r.den(), level.Q));
    }
    return audit;
}

GapAudit audit_range(Int q_min, Int q_max, const std::function<void(Int, Int)>& per_level)
{
    if (q_min < 4 || q_max < q_min || q_max > kMaxLevel)
        throw PreconditionError("audit_range needs 4 <= q_min <= q_max <= " + std::to_string(kMaxLevel));
    GapAudit audit;
    GapScanner scanner;
    IncrementalBuilder builder;
    while (builder.level() < q_max) {
        builder.advance_count();
        const Int Q = builder.level();
        if (Q < q_min)
            continue;
        const Int before = audit.total_violations();
        builder.for_each_adjacent([&](const IncrementalBuilder::Node& l, const IncrementalBuilder::Node& r) {
            audit.add(scanner.scan(l.a, l.q, r.a, r.q, Q));
        });
        if (per_level)
            per_level(Q, audit.total_violations() - before);
    }
    return audit;
}

InclusionReport verify_inclusions(const SaturatedLevel& level)
{
    if (level.Q < 4)
        throw PreconditionError("verify_inclusions needs Q >= 4");
    const GapAudit audit = audit_level(level);
    InclusionReport out;
    out.Q = level.Q;
    out.gaps = audit.gaps;
    out.violations = audit.inclusion_violations;
    for (const std::string& d : audit.diagnostics)
        if (d.find("region inclusion") != std::string::npos)
            out.diagnostics.push_back(d);
    return out;
}

InclusionReport verify_inclusions(Int Q)
{
    if (Q < 4)
        throw PreconditionError("verify_inclusions needs Q >= 4");
    return verify_inclusions(build_filter(Q));
}

// ---------------------------------------------------------------------------
// Ordinary Farey baseline

Int kappa(double x, double y)
{
    if (!(y > 0.0))
        throw PreconditionError("kappa needs y > 0");
    return static_cast<Int>(std::floor((1.0 + x) / y));
}

Int farey_step(Int q1, Int q2, Int Q)
{
    if (Q < 1 || q1 < 1 || q2 < 1 || q1 > Q || q2 > Q)
        throw PreconditionError("farey_step needs 1 <= q1, q2 <= Q");
    if (q1 + q2 <= Q)
        throw PreconditionError("farey_step needs q1 + q2 > Q");
    if (std::gcd(q1, q2) != 1)
        throw PreconditionError("farey_step needs coprime denominators");
    return (Q + q1) / q2 * q2 - q1;
}

std::vector<std::pair<Int, Int>> farey_denominator_pairs(Int Q)
{
    if (Q < 1 || Q > kMaxLevel)
        throw PreconditionError("farey_denominator_pairs: Q out of range");
    std::vector<std::pair<Int, Int>> out;
    Int q1 = 1, q2 = Q;
    do {
        out.emplace_back(q1, q2);
        const Int q3 = (Q + q1) / q2 * q2 - q1;
        q1 = std::exchange(q2, q3);
    } while (!(q1 == 1 && q2 == Q));
    return out;
}

double farey_pairs_box_fraction(Int Q, const BoxRegion& box)
{
    const auto pairs = farey_denominator_pairs(Q);
    const auto hits = std::count_if(pairs.begin(), pairs.end(),
                                    [&](const auto& p) { return box.contains(p.first, p.second, Q); });
    return static_cast<double>(hits) / static_cast<double>(pairs.size());
}

std::vector<std::pair<Int, Int>> denominator_pairs(const SaturatedLevel& level)
{
    std::vector<std::pair<Int, Int>> out;
    if (level.elements.size() < 2)
        return out;
    out.reserve(level.elements.size() - 1);
    for (std::size_t i = 0; i + 1 < level.elements.size(); ++i)
        out.emplace_back(level.elements[i].frac.den(), level.elements[i + 1].frac.den());
    return out;
}

}  // namespace satfarey
