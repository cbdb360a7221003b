#pragma once

// Limiting densities H1, H2, H3 of scaled consecutive denominator pairs on
// the cells V1, V2, V3, their integrals, and comparison against exact counts.

#include "satfarey/box.hpp"
#include "satfarey/core_fractions.hpp"
#include "satfarey/saturated_set.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace satfarey {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// H_cell(x, y) for cell in {1, 2, 3}, meaningful on the closure of V_cell.
/// Rejects x <= 0 and, for H2 and H3, y <= 0.
double density_eval(int cell, double x, double y);

struct QuadratureOptions {
    double abs_tol = 1e-8;
    int max_depth = 30;
    int max_panels = 20000;
};

/// The cell i whose closure contains the box (corners and edge midpoints
/// tested exactly); nullopt if there is none.
std::optional<int> cell_of_box(const BoxRegion& box);

/// Integral of H_cell over a box inside the closure of V_cell.
double integrate_density(int cell, const BoxRegion& box, const QuadratureOptions& opts = {});

/// Integral of H_cell over the whole cell.
double cell_mass(int cell, const QuadratureOptions& opts = {});

struct CellMasses {
    double v1 = 0;
    double v2 = 0;
    double v3 = 0;
    double total() const { return v1 + v2 + v3; }
};

CellMasses cell_masses(const QuadratureOptions& opts = {});
double total_mass(const QuadratureOptions& opts = {});

/// #{consecutive pairs (q1, q2) with (q1/Q, q2/Q) in box} / #pairs.
double empirical_box_fraction(const SaturatedLevel& level, const BoxRegion& box);
double empirical_box_fraction(Int Q, const BoxRegion& box);

struct DensityEntry {
    BoxRegion box;
    int cell = 0;
    double empirical = 0;
    double theoretical = 0;
    double ratio = 0;  // empirical / theoretical, 0 if theoretical == 0
};

struct DensityReport {
    Int Q = 0;
    std::vector<DensityEntry> entries;
    double fitted_constant = 0;  // least squares: empirical ~ c * theoretical
};

DensityReport density_report(const SaturatedLevel& level, const std::vector<BoxRegion>& boxes,
                             const QuadratureOptions& opts = {});
DensityReport density_report(Int Q, const std::vector<BoxRegion>& boxes, const QuadratureOptions& opts = {},
                             unsigned threads = 1);

/// {q, fitted_constant, entries:[{box, cell, empirical, theoretical, ratio}]},
/// numbers rounded to 12 significant digits.
std::string to_json(const DensityReport& report);

/// Reads a JSON array of boxes, each either [x0,x1,y0,y1] (numbers or
/// "p/q" strings) or "x0,x1,y0,y1".
std::vector<BoxRegion> boxes_from_json(const std::string& text);

}  // namespace satfarey
