#pragma once

#include <array>
#include <string>
#include <vector>

#include "bhom/coefficients.hpp"
#include "bhom/mesh.hpp"
#include "bhom/solve.hpp"

namespace bhom {

/// Sign convention for the flux data of the gamma cell problem, i.e. for s_i
/// in   int_{Y_i} A grad(gamma_i) . grad(phi) = s_i int_Sigma alpha phi.
///
/// flux_split (default): s_1 = -1, s_2 = +1 — the normal is the outward
/// normal of phase 1 for BOTH phases, which is what makes the homogenized
/// interface flux continuity hold in the two-scale limit.
/// literal_minus: s_1 = s_2 = -1 — reads the flux condition with each
/// phase's own outward normal instead; kept as a switch for falsifiability.
enum class GammaSign { flux_split, literal_minus };

/// The six cell solves: xi[i][k] (correctors of the k-th unit gradient on
/// phase i+1) and gamma[i] (interface-driven correctors), each periodic with
/// zero mass-weighted mean over its phase.
struct CellSolutions {
  std::array<std::array<Field, 2>, 2> xi;  // xi[i-1][k-1]
  std::array<Field, 2> gamma;              // gamma[i-1]
  std::array<std::array<SolveReport, 2>, 2> xi_reports;
  std::array<SolveReport, 2> gamma_reports;
  GammaSign sign = GammaSign::flux_split;
};

struct CellSolveOptions {
  SolveOptions solver;
  double compat_tol = 1e-8;
  GammaSign gamma_sign = GammaSign::flux_split;
};

/// Solves  -div(A (e_k + grad xi)) = 0 in Y_i,  (A (e_k + grad xi)) . nu = 0
/// on Sigma (imposed naturally by omitting interface terms), periodic, zero
/// mean. phase in {1,2}, k in {1,2}.
std::pair<Field, SolveReport> solve_xi(const Mesh& cell, const Matrix2Expr& A, int phase,
                                       int k, const SolveOptions& opts);

/// Solves  -div(A grad gamma) = 0 in Y_i with interface flux data alpha under
/// the configured sign convention, periodic, zero mean. Rejects resistivities
/// whose interface mean exceeds compat_tol (Errc::compat_violation): a zero
/// average is the compatibility condition for unique solvability of the pure
/// flux problem.
std::pair<Field, SolveReport> solve_gamma(const Mesh& cell, const Matrix2Expr& A,
                                          const Expression& alpha, int phase,
                                          const CellSolveOptions& opts);

/// Runs all six solves (2 phases x (2 xi + 1 gamma)).
CellSolutions solve_all(const Mesh& cell, const CoefficientSet& coeffs,
                        const CellSolveOptions& opts);

/// Mass-weighted interface mean of alpha under the mesh quadrature.
double interface_mean(const Mesh& cell, const Expression& alpha);

/// CSV export: xi_<i>_<k>.csv and gamma_<i>.csv under dir
/// (columns: vertex id, y1, y2, value; only the owning phase's vertices).
void export_cell_solutions(const Mesh& cell, const CellSolutions& sols,
                           const std::string& dir);

}  // namespace bhom
