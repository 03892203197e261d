#pragma once

#include <array>
#include <string>
#include <vector>

#include "bhom/expression.hpp"
#include "bhom/geometry.hpp"

namespace bhom {

using Matrix2Expr = std::array<std::array<Expression, 2>, 2>;

/// All material data of one run: per-phase conductivity tensors and reaction
/// coefficients on the cell, the interface resistivity, and the macroscopic
/// sources.
struct CoefficientSet {
  Matrix2Expr A1, A2;   // cell domain (y1, y2)
  Expression a1, a2;    // cell domain
  Expression alpha;     // cell domain, lives on the interface
  Expression f1, f2;    // macro domain (x1, x2)

  static CoefficientSet defaults();  // A=I, a=1, alpha=cos(2*pi*y1), f1=1, f2=sin(pi*x1)

  Mat2 eval_A(int phase, Vec2 y) const;
  double eval_a(int phase, Vec2 y) const;
};

/// Sampled ellipticity/positivity bounds. m_i/M_i bound the quadratic form of
/// A_i (via its symmetric part / largest singular value); eta_i bounds a_i.
struct ValidationReport {
  double m1 = 0, M1 = 0, m2 = 0, M2 = 0;
  double eta1 = 0, eta2 = 0;
  std::vector<std::string> warnings;  // e.g. numeric periodicity violations
};

/// Samples A_i and a_i on a grid_n x grid_n grid of cell-centered points,
/// classified by the exact phase predicate. Throws ellipticity_violation /
/// positivity_violation when the sampled bounds fail. Also runs the numeric
/// periodicity check (edge value mismatch > 1e-10 becomes a warning).
ValidationReport validate_coefficients(const CoefficientSet& c, const GeometrySpec& g,
                                       int grid_n);

/// Summary of the interface resistivity: its mean (the solvability quantity)
/// and estimates of the positive/negative part magnitudes.
struct AlphaDiagnostics {
  double mean_on_sigma = 0;             // (integral of alpha over Sigma) / |Sigma|
  double alpha_plus_min_on_support = 0; // min of alpha over samples where alpha > 0
  double alpha_minus_sup = 0;           // sup of max(-alpha, 0) over samples
  double sigma_measure = 0;             // |Sigma| used for the mean
};

/// Composite 2-point Gauss quadrature with quad_n panels per interface
/// component (laminate: the two lines; disk: quad_n panels spread over the
/// polygon edges). Diagnostics only; enforcement happens in the cell solver.
AlphaDiagnostics alpha_diagnostics(const Expression& alpha, const GeometrySpec& g,
                                   int quad_n);

}  // namespace bhom
