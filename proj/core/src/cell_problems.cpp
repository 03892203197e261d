#include "bhom/cell_problems.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "bhom/assemble.hpp"
#include "bhom/constraints.hpp"

namespace bhom {

namespace {

ConstraintSet cell_constraints(const Mesh& cell, int phase) {
  ConstraintSet cs;
  cs.active.assign(cell.n_verts(), 0);
  for (int v = 0; v < cell.n_verts(); ++v)
    if (cell.vphase[v] == phase) cs.active[v] = 1;
  for (const auto& [m, s] : cell.periodic)
    if (cell.vphase[m] == phase) cs.periodic.emplace_back(m, s);
  cs.mean_weights = lumped_mass_weights(cell, phase);
  return cs;
}

std::pair<Field, SolveReport> constrained_solve(const Mesh& cell, const SparseMatrix& K,
                                                const std::vector<double>& b, int phase,
                                                const SolveOptions& opts) {
  LinearSystem sys{K, b, /*symmetric=*/true};
  const ReducedSystem red = apply_constraints(sys, cell_constraints(cell, phase));
  auto [x_red, rep] = solve(red, opts);
  return {red.expand(x_red), rep};
}

double gamma_sign_of(GammaSign mode, int phase) {
  // Weak-form data sign s_i: the interface normal is the outward normal of
  // phase 1 for both phases, so integrating by parts flips the sign on the
  // phase-2 side. The literal_minus switch keeps s = -1 for both phases.
  if (mode == GammaSign::literal_minus) return -1.0;
  return phase == 1 ? -1.0 : 1.0;
}

}  // namespace

double interface_mean(const Mesh& cell, const Expression& alpha) {
  double integral = 0.0, measure = 0.0;
  for (const auto& qp : interface_quadrature(cell)) {
    integral += qp.weight * alpha.eval(cell.to_cell_coords(qp.point));
    measure += qp.weight;
  }
  return integral / measure;
}

std::pair<Field, SolveReport> solve_xi(const Mesh& cell, const Matrix2Expr& A, int phase,
                                       int k, const SolveOptions& opts) {
  const SparseMatrix K = assemble_stiffness(cell, A, phase);
  const std::vector<double> b = assemble_xi_rhs(cell, A, phase, k);
  return constrained_solve(cell, K, b, phase, opts);
}

std::pair<Field, SolveReport> solve_gamma(const Mesh& cell, const Matrix2Expr& A,
                                          const Expression& alpha, int phase,
                                          const CellSolveOptions& opts) {
  const double mean = interface_mean(cell, alpha);
  if (std::fabs(mean) > opts.compat_tol) {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "interface resistivity must have zero mean on the interface "
                  "for the flux cell problem to be solvable (measured mean "
                  "%.6g, tolerance %.2g)",
                  mean, opts.compat_tol);
    throw Error(Errc::compat_violation, buf);
  }
  const SparseMatrix K = assemble_stiffness(cell, A, phase);
  const std::vector<double> b =
      assemble_interface_load(cell, alpha, phase, gamma_sign_of(opts.gamma_sign, phase));
  return constrained_solve(cell, K, b, phase, opts.solver);
}

CellSolutions solve_all(const Mesh& cell, const CoefficientSet& coeffs,
                        const CellSolveOptions& opts) {
  CellSolutions out;
  out.sign = opts.gamma_sign;
  for (int i = 0; i < 2; ++i) {
    const Matrix2Expr& A = i == 0 ? coeffs.A1 : coeffs.A2;
    for (int k = 0; k < 2; ++k) {
      auto [f, rep] = solve_xi(cell, A, i + 1, k + 1, opts.solver);
      out.xi[i][k] = std::move(f);
      out.xi_reports[i][k] = rep;
    }
    auto [f, rep] = solve_gamma(cell, A, coeffs.alpha, i + 1, opts);
    out.gamma[i] = std::move(f);
    out.gamma_reports[i] = rep;
  }
  return out;
}

void export_cell_solutions(const Mesh& cell, const CellSolutions& sols,
                           const std::string& dir) {
  std::filesystem::create_directories(dir);
  auto write_field = [&](const Field& f, const std::string& name, int phase) {
    std::ofstream out(dir + "/" + name);
    if (!out) throw Error(Errc::io_error, "cannot write " + dir + "/" + name);
    out << "vertex,y1,y2,value\n";
    char buf[120];
    for (int v = 0; v < cell.n_verts(); ++v) {
      if (cell.vphase[v] != phase) continue;
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", v, cell.verts[v].x,
                    cell.verts[v].y, f[v]);
      out << buf;
    }
  };
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 2; ++k)
      write_field(sols.xi[i][k],
                  "xi_" + std::to_string(i + 1) + "_" + std::to_string(k + 1) + ".csv",
                  i + 1);
    write_field(sols.gamma[i], "gamma_" + std::to_string(i + 1) + ".csv", i + 1);
  }
}

}  // namespace bhom
