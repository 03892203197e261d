#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bhom/sparse.hpp"

namespace bhom {

/// Raw assembled system on the full vertex dof space, before constraints.
struct LinearSystem {
  SparseMatrix A;
  std::vector<double> b;
  bool symmetric = false;
};

/// Constraint description applied to a raw system:
///  - active: optional dof filter (cell problems restrict to one phase);
///  - dirichlet: homogeneous Dirichlet dofs, eliminated;
///  - periodic: (master, slave) pairs, slave rows/columns folded into masters;
///  - mean_weights: when non-empty, a single Lagrange-multiplier row/column
///    enforcing sum_p w_p x_p = 0 (zero phase average without pinning a node).
struct ConstraintSet {
  std::vector<std::uint8_t> active;  // empty = all dofs active
  std::vector<int> dirichlet;
  std::vector<std::pair<int, int>> periodic;
  std::vector<double> mean_weights;
};

/// Constrained system plus the bookkeeping to expand solutions back to the
/// raw dof space (slaves copy their master, Dirichlet dofs are zero).
struct ReducedSystem {
  SparseMatrix A;
  std::vector<double> b;
  bool symmetric = false;
  bool has_multiplier = false;
  int n_raw = 0;
  std::vector<int> raw_to_red;  // -1 for eliminated dofs
  std::vector<int> red_to_raw;  // representative raw dof per reduced dof

  int n_red() const { return A.n(); }
  std::vector<double> expand(const std::vector<double>& x_red) const;
  double multiplier_value(const std::vector<double>& x_red) const;
};

/// Folds the constraints into the system. Throws Errc::constraint_conflict if
/// a slave dof is also Dirichlet, or a pair chains two slaves.
ReducedSystem apply_constraints(const LinearSystem& sys, const ConstraintSet& cs);

}  // namespace bhom
