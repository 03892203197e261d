#pragma once

#include <limits>
#include <string>
#include <vector>

#include "bhom/constraints.hpp"
#include "bhom/errors.hpp"
#include "bhom/sparse.hpp"

namespace bhom {

struct SolveReport {
  int iterations = 0;
  double rel_residual = 0.0;  // ||b - A x|| / ||b||
  std::string method;         // "cg", "bicgstab", "sparse-lu"
  bool breakdown = false;
  bool indefinite = false;    // a p'Ap <= 0 certificate was hit
  double ritz_min = std::numeric_limits<double>::quiet_NaN();  // from the CG tridiagonal
};

/// Thrown when a solve breaks down or exceeds max_iter; carries the report so
/// callers can classify the failure (indefiniteness vs. plain stagnation).
class SolveFailure : public Error {
 public:
  SolveFailure(Errc code, const std::string& msg, SolveReport rep)
      : Error(code, msg), report(std::move(rep)) {}
  SolveReport report;
};

struct SolveOptions {
  double tol = 1e-10;
  int max_iter = 50000;
  int direct_dim_cap = 20000;  // direct factorization below, Krylov above
};

/// Jacobi-preconditioned conjugate gradients. Tracks the Lanczos tridiagonal
/// and reports its smallest Ritz value (sign-faithful coercivity estimate of
/// the preconditioned operator). Returns breakdown/indefinite instead of
/// throwing; `solve` wraps this with the error policy.
SolveReport cg_solve(const SparseMatrix& A, const std::vector<double>& b,
                     std::vector<double>& x, double tol, int max_iter);

/// Jacobi-preconditioned BiCGStab for the non-symmetric / saddle systems.
SolveReport bicgstab_solve(const SparseMatrix& A, const std::vector<double>& b,
                           std::vector<double>& x, double tol, int max_iter);

/// Sparse LU (direct) via Eigen.
SolveReport lu_solve(const SparseMatrix& A, const std::vector<double>& b,
                     std::vector<double>& x);

/// Dispatch per system shape: symmetric without multiplier -> CG; otherwise
/// direct factorization up to direct_dim_cap, else BiCGStab. Throws
/// SolveFailure (Errc::solver_failure or Errc::indefinite_form) on breakdown
/// or non-convergence; the thrown report carries the Ritz estimate.
std::pair<std::vector<double>, SolveReport> solve(const ReducedSystem& sys,
                                                  const SolveOptions& opts);

/// Smallest eigenvalue of K relative to the SPD Gram matrix G (inverse power
/// iteration with CG inner solves, deterministic start vector). Used by the
/// discrete a priori bound check.
double generalized_min_eig(const SparseMatrix& K, const SparseMatrix& G,
                           double tol = 1e-6, int max_outer = 40);

}  // namespace bhom
