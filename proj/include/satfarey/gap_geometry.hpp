#pragma once

// Gap records of a saturated level: each consecutive pair a1/q1 < a_{r+1}/q_{r+1}
// together with the r-1 ordinary Farey fractions of order Q hidden between
// them, their index signature, and the exact region/cell classification of
// the scaled denominator pair (q1/Q, q_{r+1}/Q).

#include "satfarey/box.hpp"
#include "satfarey/core_fractions.hpp"
#include "satfarey/saturated_set.hpp"

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace satfarey {

/// cx*x + cy*y + c0 >= 0.
struct HalfPlane {
    Int cx;
    Int cy;
    Int c0;
};

/// Convex polygon given by closed half-planes with integer coefficients.
struct Polygon {
    std::string name;
    std::vector<HalfPlane> constraints;
    /// Enclosing box stated alongside the polygon, when there is one.
    std::optional<BoxRegion> bounding_box;

    bool contains(Int q1, Int q2, Int Q) const;
    bool contains(const Rational& x, const Rational& y) const;
    bool contains(double x, double y) const;
};

namespace regions {
const Polygon& v1();
const Polygon& v2();
const Polygon& v3();
/// Every named polygon: V1..V3 and W1, W2, W3_1 .. W5_4, W9_4.
const std::vector<Polygon>& all();
const Polygon* find(std::string_view name);
}  // namespace regions

/// (x, y) in V using its defining max/min inequalities directly.
bool in_v(Int q1, Int q2, Int Q);

struct RegionLabel {
    bool in_v = false;
    bool in_v1 = false;
    bool in_v2 = false;
    bool in_v3 = false;

    int cell_count() const { return int(in_v1) + int(in_v2) + int(in_v3); }
    /// "V1", "V2", "V3", "boundary" (several closed cells) or "outside".
    std::string cell() const;
};

RegionLabel region_of(Int q1, Int q2, Int Q);

/// Non-owning view of one gap, valid until the producing GapScanner scans again.
struct GapView {
    Int Q = 0;
    std::span<const Int> nums;  // a_1 .. a_{r+1}
    std::span<const Int> dens;  // q_1 .. q_{r+1}
    int r = 0;
    std::span<const Int> signature;  // nu_2 .. nu_r
    int mediant_pos = 0;             // 1-based i with q_i = q_1 + q_{r+1}; 0 if r == 1
    int mediant_hits = 0;            // how many i in 2..r satisfy that
    Int K = 0;                       // (q_2 - q_{r+1}) / q_1, r >= 2
    Int nu = 0;                      // (q_r - q_1) / q_{r+1}, r >= 2
    bool k_nu_integral = true;

    Int q_first() const { return dens.front(); }
    Int q_last() const { return dens.back(); }
};

/// Recovers the Farey chain of a gap. The first interior fraction is the
/// right-unimodular neighbour of the left end with the largest denominator
/// <= Q; the rest follow from q_{i+1} = nu_i q_i - q_{i-1}.
class GapScanner {
public:
    GapView scan(Int a1, Int q1, Int a2, Int q2, Int Q);

private:
    std::vector<Int> nums_;
    std::vector<Int> dens_;
    std::vector<Int> sig_;
};

struct GapRecord {
    Int Q = 0;
    std::vector<Int> chain;
    std::vector<Fraction> fractions;
    int r = 0;
    std::vector<Int> signature;
    std::optional<int> mediant_pos;
    std::optional<Int> K;
    std::optional<Int> nu;

    static GapRecord from_view(const GapView& v);
};

/// One record per consecutive pair of the level (0/1 and wraparound excluded).
std::vector<GapRecord> gap_records(const SaturatedLevel& level);
std::vector<GapRecord> gap_records(Int Q);

/// Continuant with K(empty) = 1 and K_l = x_l K_{l-1} - K_{l-2}.
Int continuant(std::span<const Int> values);

struct KNu {
    Int K;
    Int nu;
};

/// Throws PreconditionError for r < 2 and InvariantError if either value is
/// not a positive integer.
KNu extract_K_nu(const GapRecord& g);

struct WCell {
    int r = 0;
    int mediant_pos = 0;
    std::string label;                // W1, W2, W3_1, ..., W9_4, or r<r>_i<i>
    const Polygon* polygon = nullptr; // null when no explicit polygon exists
    bool inside = true;               // membership in polygon (true if none)
    /// Expected signature of the cell when it is pinned down (r <= 5).
    std::optional<std::vector<Int>> expected_signature;
    bool signature_ok = true;
};

WCell wcell_of(const GapView& g);
WCell wcell_of(const GapRecord& g);

/// Accumulates every per-gap law: region inclusion (r = 1: the three V1
/// inequalities; r >= 2: q1+q_{r+1} <= Q, 3q1+2q_{r+1} > Q,
/// q_{r+1}-2q1+Q >= 0, point in V2 u V3), unit continuant, unique mediant
/// position, positive integral (K, nu), admissible signatures for r <= 5 and
/// explicit W-cell membership.
struct GapAudit {
    static constexpr int kMaxTracked = 48;

    Int gaps = 0;
    Int inclusion_violations = 0;
    Int continuant_violations = 0;
    Int mediant_violations = 0;
    Int k_nu_violations = 0;
    Int signature_violations = 0;
    Int wcell_violations = 0;
    Int max_r = 0;
    /// counts[r][mediant_pos] for r, pos < kMaxTracked.
    std::vector<Int> counts = std::vector<Int>(kMaxTracked * kMaxTracked, 0);
    std::vector<std::string> diagnostics;

    void add(const GapView& g);
    Int count(int r, int pos) const;
    Int total_violations() const
    {
        return inclusion_violations + continuant_violations + mediant_violations + k_nu_violations +
               signature_violations + wcell_violations;
    }

private:
    void note(const GapView& g, const std::string& what);
};

GapAudit audit_level(const SaturatedLevel& level);

/// Audits every level in [q_min, q_max] from one incremental run.
/// per_level(Q, violations_at_Q) is called after each level if provided.
GapAudit audit_range(Int q_min, Int q_max,
                     const std::function<void(Int, Int)>& per_level = nullptr);

struct InclusionReport {
    Int Q = 0;
    Int gaps = 0;
    Int violations = 0;
    std::vector<std::string> diagnostics;
};

InclusionReport verify_inclusions(const SaturatedLevel& level);
InclusionReport verify_inclusions(Int Q);

/// floor((1 + x)/y).
Int kappa(double x, double y);

/// Next denominator after consecutive Farey denominators (q1, q2) of order Q.
Int farey_step(Int q1, Int q2, Int Q);

/// Denominator pairs of consecutive elements of {0/1} u F_Q, obtained by
/// iterating farey_step from (1, Q) until the cycle closes.
std::vector<std::pair<Int, Int>> farey_denominator_pairs(Int Q);

/// Share of consecutive Farey denominator pairs of order Q inside Q*box.
double farey_pairs_box_fraction(Int Q, const BoxRegion& box);

/// (q1, q_{r+1}) for every consecutive pair of the level.
std::vector<std::pair<Int, Int>> denominator_pairs(const SaturatedLevel& level);

}  // namespace satfarey
