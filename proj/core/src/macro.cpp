#include "bhom/macro.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "bhom/assemble.hpp"

namespace bhom {

namespace {

// Shift a matrix on the n-dof vertex space into a 2n-dof block position.
void add_block(TripletList& out, const SparseMatrix& M, int row_off, int col_off,
               double scale) {
  const auto& rp = M.row_ptr();
  const auto& ci = M.col_idx();
  const auto& vv = M.values();
  for (int r = 0; r < M.n(); ++r)
    for (int k = rp[r]; k < rp[r + 1]; ++k)
      out.add(r + row_off, ci[k] + col_off, scale * vv[k]);
}

}  // namespace

MacroSystem assemble_macro(const Mesh& mesh, const EffectiveCoefficients& eff,
                           const Expression& g1, const Expression& g2) {
  const int n = mesh.n_verts();
  MacroSystem ms;
  ms.n_verts = n;

  TripletList trips(2 * n);
  const bool has_convection = eff.B[0].norm() > 0.0 || eff.B[1].norm() > 0.0;

  for (int i = 0; i < 2; ++i) {
    const int off = i * n;
    add_block(trips, assemble_stiffness_const(mesh, eff.Aeff[i], 1), off, off, 1.0);
    add_block(trips, assemble_mass_const(mesh, eff.c[i], 1), off, off, 1.0);
    if (has_convection)
      add_block(trips, assemble_convection_const(mesh, eff.B[i], 1), off, off, 1.0);
  }
  // Cross coupling: -B_j . grad u_j - d u_j tested against the other field.
  const SparseMatrix mass1 = assemble_mass_const(mesh, 1.0, 1);
  add_block(trips, mass1, 0, n, -eff.d);
  add_block(trips, mass1, n, 0, -eff.d);
  if (has_convection) {
    add_block(trips, assemble_convection_const(mesh, eff.B[1], 1), 0, n, -1.0);
    add_block(trips, assemble_convection_const(mesh, eff.B[0], 1), n, 0, -1.0);
  }

  std::vector<double> b(2 * n, 0.0);
  const std::vector<double> b1 = assemble_load(mesh, g1, 1);
  const std::vector<double> b2 = assemble_load(mesh, g2, 1);
  for (int v = 0; v < n; ++v) {
    b[v] = b1[v];
    b[n + v] = b2[v];
  }

  LinearSystem sys{trips.build(), std::move(b), /*symmetric=*/!has_convection};

  ConstraintSet cs;
  for (int v : mesh.dirichlet1) {
    cs.dirichlet.push_back(v);
    cs.dirichlet.push_back(v + n);
  }
  ms.sys = apply_constraints(sys, cs);

  // Mesh-Peclet warning where the tensor is nondegenerate.
  const double h = 1.0 / mesh.grid_n;
  for (int i = 0; i < 2; ++i) {
    const double lo = min_eig_sym(eff.Aeff[i]);
    const double bnorm = eff.B[i].norm();
    if (lo > 1e-12 && bnorm * h / (2.0 * lo) > 1.0) {
      char buf[140];
      std::snprintf(buf, sizeof buf,
                    "mesh Peclet number |B%d| h / (2 min-eig Aeff%d) = %.3g exceeds 1; "
                    "the Galerkin convection discretization may oscillate",
                    i + 1, i + 1, bnorm * h / (2.0 * lo));
      ms.warnings.emplace_back(buf);
    }
  }
  return ms;
}

MacroSolution solve_macro(const Mesh& mesh, const MacroSystem& ms,
                          const EffectiveCoefficients& eff, const SolveOptions& opts) {
  MacroSolution sol;
  sol.mesh = &mesh;
  try {
    auto [x_red, rep] = solve(ms.sys, opts);
    sol.report = rep;
    const std::vector<double> x = ms.sys.expand(x_red);
    sol.u1.assign(x.begin(), x.begin() + ms.n_verts);
    sol.u2.assign(x.begin() + ms.n_verts, x.end());
  } catch (const SolveFailure& f) {
    char buf[240];
    std::snprintf(buf, sizeof buf,
                  "homogenized solve failed (%s); possible loss of coercivity: "
                  "|d| = %.3g, |B1| = %.3g, |B2| = %.3g against c = (%.3g, %.3g), "
                  "min-eig Aeff = (%.3g, %.3g)",
                  f.what(), std::fabs(eff.d), eff.B[0].norm(), eff.B[1].norm(),
                  eff.c[0], eff.c[1], min_eig_sym(eff.Aeff[0]), min_eig_sym(eff.Aeff[1]));
    throw SolveFailure(f.code, buf, f.report);
  }
  return sol;
}

void export_macro_solution(const MacroSolution& sol, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const Mesh& mesh = *sol.mesh;
  for (int i = 0; i < 2; ++i) {
    const std::string path = dir + "/macro_u" + std::to_string(i + 1) + ".csv";
    std::ofstream out(path);
    if (!out) throw Error(Errc::io_error, "cannot write " + path);
    out << "vertex,x1,x2,value\n";
    const Field& u = i == 0 ? sol.u1 : sol.u2;
    char buf[120];
    for (int v = 0; v < mesh.n_verts(); ++v) {
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", v, mesh.verts[v].x,
                    mesh.verts[v].y, u[v]);
      out << buf;
    }
  }
}

}  // namespace bhom
