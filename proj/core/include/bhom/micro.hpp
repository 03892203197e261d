#pragma once

#include <string>
#include <vector>

#include "bhom/coefficients.hpp"
#include "bhom/constraints.hpp"
#include "bhom/mesh.hpp"
#include "bhom/solve.hpp"

namespace bhom {

/// Direct simulation of the epsilon-periodic transmission problem: stiffness
/// A(x/eps) + reaction a(x/eps) + interface coupling alpha(x/eps) with the
/// unweighted surface measure, Dirichlet zero on each phase's outer boundary.

struct MicroSolution {
  const Mesh* mesh = nullptr;
  Field u;  // one value per (duplicated) vertex: u1 on phase-1, u2 on phase-2 dofs
  double epsilon = 0.0;
  SolveReport report;
  double vnorm = 0.0;  // energy norm: per-phase H1 norms + interface jump L2
};

/// Assembled micro system (symmetric). The solver does not require zero-mean
/// alpha; coercivity is checked a posteriori via the CG Ritz estimate.
ReducedSystem assemble_micro(const Mesh& mesh, const CoefficientSet& coeffs);

/// CG solve + V-norm. CG breakdown with a p'Ap <= 0 certificate is rethrown
/// as Errc::indefinite_form with the Ritz smallest-eigenvalue estimate in the
/// message; plain non-convergence stays Errc::solver_failure.
MicroSolution solve_micro(const Mesh& mesh, const ReducedSystem& sys,
                          const SolveOptions& opts);

/// ||(u1,u2)||_{V}^2 = sum_i (||u_i||^2 + ||grad u_i||^2) + ||u1 - u2||^2_Sigma.
double vnorm(const Mesh& mesh, const Field& u);

/// L2(Omega) norm of the piecewise source (f1 on phase 1, f2 on phase 2).
double source_norm(const Mesh& mesh, const CoefficientSet& coeffs);

struct AprioriRow {
  double epsilon = 0.0;
  double vnorm = 0.0;
  double fnorm = 0.0;
  double ratio = 0.0;     // vnorm / fnorm
  double ritz_min = 0.0;
  int dofs = 0;
};

/// Sweeps the given epsilons, recording the a priori ratio per solve. The
/// uniform-boundedness flag (max ratio / min ratio <= band) is evaluated by
/// the caller.
std::vector<AprioriRow> apriori_sweep(const CoefficientSet& coeffs, const GeometrySpec& g,
                                      int N, const std::vector<double>& eps_list,
                                      const SolveOptions& opts, int size_cap = 512);

void write_apriori_csv(const std::vector<AprioriRow>& rows, const std::string& path);

/// micro_u_<eps>.csv (vertex id, x1, x2, phase, value).
void export_micro_solution(const MicroSolution& sol, const std::string& dir);

}  // namespace bhom
