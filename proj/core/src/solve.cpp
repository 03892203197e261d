#include "bhom/solve.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>

namespace bhom {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

// Jacobi preconditioner; falls back to the identity when the diagonal is not
// strictly positive (the caller separately flags indefiniteness).
struct Jacobi {
  std::vector<double> inv;
  bool positive = true;

  explicit Jacobi(const SparseMatrix& A) {
    const auto d = A.diagonal();
    inv.resize(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (!(d[i] > 0.0)) positive = false;
      inv[i] = d[i] != 0.0 ? 1.0 / d[i] : 1.0;
    }
    if (!positive) std::fill(inv.begin(), inv.end(), 1.0);
  }

  void apply(const std::vector<double>& r, std::vector<double>& z) const {
    z.resize(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) z[i] = inv[i] * r[i];
  }
};

// Smallest eigenvalue of the symmetric tridiagonal with diagonal d and
// off-diagonal e, by Sturm-count bisection.
double tridiag_min_eig(const std::vector<double>& d, const std::vector<double>& e) {
  const int n = static_cast<int>(d.size());
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  double lo = d[0], hi = d[0];
  for (int i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::fabs(e[i - 1]) : 0.0) + (i + 1 < n ? std::fabs(e[i]) : 0.0);
    lo = std::min(lo, d[i] - r);
    hi = std::max(hi, d[i] + r);
  }
  auto count_below = [&](double x) {
    // Number of eigenvalues < x (LDL^T sign count with safeguarding).
    int count = 0;
    double q = d[0] - x;
    if (q < 0.0) ++count;
    for (int i = 1; i < n; ++i) {
      const double denom = q != 0.0 ? q : 1e-300;
      q = d[i] - x - e[i - 1] * e[i - 1] / denom;
      if (q < 0.0) ++count;
    }
    return count;
  };
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::fabs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(mid) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

Eigen::SparseMatrix<double> to_eigen(const SparseMatrix& A) {
  Eigen::SparseMatrix<double> M(A.n(), A.n());
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(A.nnz());
  for (int r = 0; r < A.n(); ++r)
    for (int k = A.row_ptr()[r]; k < A.row_ptr()[r + 1]; ++k)
      trips.emplace_back(r, A.col_idx()[k], A.values()[k]);
  M.setFromTriplets(trips.begin(), trips.end());
  return M;
}

}  // namespace

SolveReport cg_solve(const SparseMatrix& A, const std::vector<double>& b,
                     std::vector<double>& x, double tol, int max_iter) {
  const int n = A.n();
  SolveReport rep;
  rep.method = "cg";
  x.assign(n, 0.0);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    rep.rel_residual = 0.0;
    return rep;
  }

  const Jacobi prec(A);
  if (!prec.positive) rep.indefinite = true;  // SPD matrices have positive diagonals

  std::vector<double> r = b, z, p, Ap;
  prec.apply(r, z);
  p = z;
  double rz = dot(r, z);

  // Lanczos tridiagonal from the CG coefficients: its extreme Ritz values
  // estimate the spectrum of the preconditioned operator (sign-faithful).
  std::vector<double> tdiag, toff;
  double prev_alpha = 0.0, prev_beta = 0.0;
  const int ritz_cap = 10000;

  double rel = 1.0;
  for (int it = 0; it < max_iter; ++it) {
    A.multiply(p, Ap);
    const double pAp = dot(p, Ap);
    if (!(pAp > 0.0)) {
      // p'Ap <= 0 certifies the (preconditioned) operator is not positive
      // definite; report the Rayleigh quotient as the eigenvalue bound.
      rep.indefinite = true;
      rep.breakdown = true;
      const double pp = dot(p, p);
      rep.ritz_min = pp > 0.0 ? pAp / pp : 0.0;
      rep.iterations = it;
      rep.rel_residual = rel;
      return rep;
    }
    const double alpha = rz / pAp;
    if (static_cast<int>(tdiag.size()) < ritz_cap) {
      double dctr = 1.0 / alpha;
      if (!tdiag.empty()) dctr += prev_beta / prev_alpha;
      tdiag.push_back(dctr);
      // off-diagonal entry is appended when beta becomes available below
    }
    axpy(alpha, p, x);
    axpy(-alpha, Ap, r);
    rel = norm2(r) / bnorm;
    rep.iterations = it + 1;
    if (rel <= tol) break;
    prec.apply(r, z);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    if (static_cast<int>(toff.size()) + 1 < static_cast<int>(tdiag.size()) + 1 &&
        static_cast<int>(toff.size()) < ritz_cap - 1)
      toff.push_back(std::sqrt(std::max(beta, 0.0)) / alpha);
    prev_alpha = alpha;
    prev_beta = beta;
    rz = rz_new;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }

  toff.resize(tdiag.empty() ? 0 : tdiag.size() - 1);
  rep.ritz_min = tridiag_min_eig(tdiag, toff);
  rep.rel_residual = rel;
  rep.breakdown = rel > tol;
  return rep;
}

SolveReport bicgstab_solve(const SparseMatrix& A, const std::vector<double>& b,
                           std::vector<double>& x, double tol, int max_iter) {
  const int n = A.n();
  SolveReport rep;
  rep.method = "bicgstab";
  x.assign(n, 0.0);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) return rep;

  const Jacobi prec(A);
  std::vector<double> r = b;
  std::vector<double> rhat = r, p(n, 0.0), v(n, 0.0), y, z, t, s(n);
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  double rel = 1.0;

  for (int it = 0; it < max_iter; ++it) {
    const double rho_new = dot(rhat, r);
    if (std::fabs(rho_new) < 1e-290) {
      rep.breakdown = true;
      break;
    }
    if (it == 0) {
      p = r;
    } else {
      const double beta = (rho_new / rho) * (alpha / omega);
      for (int i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    }
    rho = rho_new;
    prec.apply(p, y);
    A.multiply(y, v);
    const double rv = dot(rhat, v);
    if (std::fabs(rv) < 1e-290) {
      rep.breakdown = true;
      break;
    }
    alpha = rho / rv;
    for (int i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    if (norm2(s) / bnorm <= tol) {
      axpy(alpha, y, x);
      rep.iterations = it + 1;
      rel = norm2(s) / bnorm;
      break;
    }
    prec.apply(s, z);
    A.multiply(z, t);
    const double tt = dot(t, t);
    if (tt < 1e-290) {
      rep.breakdown = true;
      break;
    }
    omega = dot(t, s) / tt;
    if (std::fabs(omega) < 1e-290) {
      rep.breakdown = true;
      break;
    }
    axpy(alpha, y, x);
    axpy(omega, z, x);
    for (int i = 0; i < n; ++i) r[i] = s[i] - omega * t[i];
    rel = norm2(r) / bnorm;
    rep.iterations = it + 1;
    if (rel <= tol) break;
  }

  // True residual, not the recursive one.
  std::vector<double> Ax;
  A.multiply(x, Ax);
  for (int i = 0; i < n; ++i) Ax[i] = b[i] - Ax[i];
  rep.rel_residual = norm2(Ax) / bnorm;
  if (rep.rel_residual > tol) rep.breakdown = true;
  return rep;
}

SolveReport lu_solve(const SparseMatrix& A, const std::vector<double>& b,
                     std::vector<double>& x) {
  SolveReport rep;
  rep.method = "sparse-lu";
  rep.iterations = 1;
  const int n = A.n();
  x.assign(n, 0.0);
  if (n == 0) return rep;

  Eigen::SparseMatrix<double> M = to_eigen(A);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(M);
  lu.factorize(M);
  if (lu.info() != Eigen::Success) {
    rep.breakdown = true;
    rep.rel_residual = std::numeric_limits<double>::infinity();
    return rep;
  }
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) rhs[i] = b[i];
  Eigen::VectorXd sol = lu.solve(rhs);
  for (int i = 0; i < n; ++i) x[i] = sol[i];

  std::vector<double> Ax;
  A.multiply(x, Ax);
  double rn = 0.0, bn = 0.0;
  for (int i = 0; i < n; ++i) {
    rn += (b[i] - Ax[i]) * (b[i] - Ax[i]);
    bn += b[i] * b[i];
  }
  rep.rel_residual = bn > 0.0 ? std::sqrt(rn / bn) : std::sqrt(rn);
  return rep;
}

std::pair<std::vector<double>, SolveReport> solve(const ReducedSystem& sys,
                                                  const SolveOptions& opts) {
  std::vector<double> x;
  SolveReport rep;
  if (sys.n_red() == 0) {
    rep.method = "empty";
    return {x, rep};
  }
  if (sys.symmetric && !sys.has_multiplier) {
    rep = cg_solve(sys.A, sys.b, x, opts.tol, opts.max_iter);
  } else if (sys.n_red() <= opts.direct_dim_cap) {
    rep = lu_solve(sys.A, sys.b, x);
  } else {
    rep = bicgstab_solve(sys.A, sys.b, x, opts.tol, opts.max_iter);
  }
  if (rep.breakdown || (rep.method != "sparse-lu" && rep.rel_residual > opts.tol) ||
      (rep.method == "sparse-lu" && !(rep.rel_residual < 1e-6))) {
    const Errc code = rep.indefinite ? Errc::indefinite_form : Errc::solver_failure;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "%s did not converge (n=%d, iters=%d, rel residual=%.3g, "
                  "ritz_min=%.3g)",
                  rep.method.c_str(), sys.n_red(), rep.iterations, rep.rel_residual,
                  rep.ritz_min);
    throw SolveFailure(code, buf, rep);
  }
  return {x, rep};
}

double generalized_min_eig(const SparseMatrix& K, const SparseMatrix& G, double tol,
                           int max_outer) {
  const int n = K.n();
  // Deterministic, mildly oscillatory start vector.
  std::vector<double> z(n);
  for (int i = 0; i < n; ++i) z[i] = 1.0 + 0.5 * ((i * 2654435761u >> 16) % 1000) / 1000.0;

  double rho_prev = 0.0;
  for (int it = 0; it < max_outer; ++it) {
    std::vector<double> gz = G.multiply(z);
    std::vector<double> y;
    SolveReport rep = cg_solve(K, gz, y, 1e-10, 20000);
    if (rep.breakdown) return rep.indefinite ? std::min(rep.ritz_min, 0.0) : rho_prev;
    const double ny = std::sqrt(G.quad_form(y, y));
    if (!(ny > 0.0)) return rho_prev;
    for (int i = 0; i < n; ++i) z[i] = y[i] / ny;
    const double rho = K.quad_form(z, z) / G.quad_form(z, z);
    if (it > 0 && std::fabs(rho - rho_prev) <= tol * std::fabs(rho)) return rho;
    rho_prev = rho;
  }
  return rho_prev;
}

}  // namespace bhom
