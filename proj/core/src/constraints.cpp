#include "bhom/constraints.hpp"

#include <cmath>

#include "bhom/errors.hpp"

namespace bhom {

ReducedSystem apply_constraints(const LinearSystem& sys, const ConstraintSet& cs) {
  const int n = sys.A.n();
  ReducedSystem out;
  out.n_raw = n;
  out.symmetric = sys.symmetric;

  // Representative raw dof per raw dof: self, a periodic master, or -1.
  std::vector<int> rep(n);
  for (int i = 0; i < n; ++i)
    rep[i] = (cs.active.empty() || cs.active[i]) ? i : -1;

  std::vector<char> is_slave(n, 0), is_master(n, 0);
  for (const auto& [m, s] : cs.periodic) {
    if (rep[m] < 0 || rep[s] < 0) continue;  // outside the active set
    if (is_slave[s])
      throw Error(Errc::constraint_conflict,
                  "dof " + std::to_string(s) + " is slave of two masters");
    if (is_slave[m])
      throw Error(Errc::constraint_conflict,
                  "master dof " + std::to_string(m) + " is itself a slave");
    is_slave[s] = 1;
    is_master[m] = 1;
    rep[s] = m;
  }
  for (const auto& [m, s] : cs.periodic)
    if (rep[m] >= 0 && is_slave[m])
      throw Error(Errc::constraint_conflict, "periodic pairs form a chain");

  for (int d : cs.dirichlet) {
    if (rep[d] < 0) continue;
    if (is_slave[d])
      throw Error(Errc::constraint_conflict,
                  "dof " + std::to_string(d) + " is both periodic slave and Dirichlet");
    rep[d] = -1;
  }
  // A Dirichlet master pins its slaves too.
  for (const auto& [m, s] : cs.periodic)
    if (rep[m] < 0 && rep[s] >= 0) rep[s] = -1;

  out.raw_to_red.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    if (rep[i] == i && out.raw_to_red[i] < 0) {
      out.raw_to_red[i] = static_cast<int>(out.red_to_raw.size());
      out.red_to_raw.push_back(i);
    }
  }
  for (int i = 0; i < n; ++i)
    if (rep[i] >= 0 && rep[i] != i) out.raw_to_red[i] = out.raw_to_red[rep[i]];

  const int n_free = static_cast<int>(out.red_to_raw.size());
  out.has_multiplier = !cs.mean_weights.empty();
  const int n_red = n_free + (out.has_multiplier ? 1 : 0);

  std::vector<int> rows, cols;
  std::vector<double> vals;
  rows.reserve(sys.A.nnz());
  cols.reserve(sys.A.nnz());
  vals.reserve(sys.A.nnz());
  const auto& rp = sys.A.row_ptr();
  const auto& ci = sys.A.col_idx();
  const auto& vv = sys.A.values();
  for (int r = 0; r < n; ++r) {
    const int rr = out.raw_to_red[r];
    if (rr < 0) continue;
    for (int k = rp[r]; k < rp[r + 1]; ++k) {
      const int cc = out.raw_to_red[ci[k]];
      if (cc < 0) continue;  // homogeneous Dirichlet column drops out
      rows.push_back(rr);
      cols.push_back(cc);
      vals.push_back(vv[k]);
    }
  }

  out.b.assign(n_red, 0.0);
  for (int r = 0; r < n; ++r) {
    const int rr = out.raw_to_red[r];
    if (rr >= 0 && r < static_cast<int>(sys.b.size())) out.b[rr] += sys.b[r];
  }

  if (out.has_multiplier) {
    std::vector<double> w(n_free, 0.0);
    for (int r = 0; r < n; ++r) {
      const int rr = out.raw_to_red[r];
      if (rr >= 0) w[rr] += cs.mean_weights[r];
    }
    for (int i = 0; i < n_free; ++i) {
      if (w[i] == 0.0) continue;
      rows.push_back(i);
      cols.push_back(n_free);
      vals.push_back(w[i]);
      rows.push_back(n_free);
      cols.push_back(i);
      vals.push_back(w[i]);
    }
  }

  out.A = SparseMatrix::from_triplets(n_red, std::move(rows), std::move(cols),
                                      std::move(vals));
  return out;
}

std::vector<double> ReducedSystem::expand(const std::vector<double>& x_red) const {
  std::vector<double> x(n_raw, 0.0);
  for (int i = 0; i < n_raw; ++i)
    if (raw_to_red[i] >= 0) x[i] = x_red[raw_to_red[i]];
  return x;
}

double ReducedSystem::multiplier_value(const std::vector<double>& x_red) const {
  if (!has_multiplier) throw Error(Errc::internal_error, "system has no multiplier");
  return x_red.back();
}

}  // namespace bhom
