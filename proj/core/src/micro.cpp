#include "bhom/micro.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "bhom/assemble.hpp"

namespace bhom {

ReducedSystem assemble_micro(const Mesh& mesh, const CoefficientSet& coeffs) {
  SparseMatrix K = assemble_stiffness(mesh, coeffs.A1, 1)
                       .add(assemble_stiffness(mesh, coeffs.A2, 2))
                       .add(assemble_mass(mesh, coeffs.a1, 1))
                       .add(assemble_mass(mesh, coeffs.a2, 2))
                       .add(assemble_interface_coupling(mesh, coeffs.alpha));

  std::vector<double> b(mesh.n_verts(), 0.0);
  // Sources are macroscopic: evaluated at the physical point, per phase.
  const std::vector<double> b1 =
      assemble_load_fn(mesh, [&](Vec2 x) { return coeffs.f1.eval(x); }, 1);
  const std::vector<double> b2 =
      assemble_load_fn(mesh, [&](Vec2 x) { return coeffs.f2.eval(x); }, 2);
  for (int v = 0; v < mesh.n_verts(); ++v) b[v] = b1[v] + b2[v];

  LinearSystem sys{std::move(K), std::move(b), /*symmetric=*/true};
  ConstraintSet cs;
  cs.dirichlet = mesh.dirichlet1;
  cs.dirichlet.insert(cs.dirichlet.end(), mesh.dirichlet2.begin(),
                      mesh.dirichlet2.end());
  return apply_constraints(sys, cs);
}

MicroSolution solve_micro(const Mesh& mesh, const ReducedSystem& sys,
                          const SolveOptions& opts) {
  MicroSolution sol;
  sol.mesh = &mesh;
  sol.epsilon = mesh.epsilon;
  try {
    auto [x_red, rep] = solve(sys, opts);
    sol.report = rep;
    sol.u = sys.expand(x_red);
  } catch (const SolveFailure& f) {
    if (f.report.indefinite || f.report.ritz_min < 0.0) {
      char buf[220];
      std::snprintf(buf, sizeof buf,
                    "micro bilinear form is numerically indefinite (Ritz smallest "
                    "eigenvalue estimate %.3g); the negative part of the interface "
                    "resistivity is too strong for coercivity: %s",
                    f.report.ritz_min, f.what());
      throw SolveFailure(Errc::indefinite_form, buf, f.report);
    }
    throw;
  }
  if (sol.report.ritz_min < 0.0) {
    char buf[180];
    std::snprintf(buf, sizeof buf,
                  "micro solve converged but the Ritz smallest eigenvalue estimate is "
                  "negative (%.3g): coercivity lost",
                  sol.report.ritz_min);
    throw SolveFailure(Errc::indefinite_form, buf, sol.report);
  }
  sol.vnorm = vnorm(mesh, sol.u);
  return sol;
}

double vnorm(const Mesh& mesh, const Field& u) {
  double s = 0.0;
  for (int i = 1; i <= 2; ++i) s += l2sq_phase(mesh, i, u) + h1sq_phase(mesh, i, u);
  s += jump_l2sq(mesh, u);
  return std::sqrt(s);
}

double source_norm(const Mesh& mesh, const CoefficientSet& coeffs) {
  const double s1 = integrate_phase(mesh, 1, [&](Vec2 x) {
    const double v = coeffs.f1.eval(x);
    return v * v;
  });
  const double s2 = integrate_phase(mesh, 2, [&](Vec2 x) {
    const double v = coeffs.f2.eval(x);
    return v * v;
  });
  return std::sqrt(s1 + s2);
}

std::vector<AprioriRow> apriori_sweep(const CoefficientSet& coeffs, const GeometrySpec& g,
                                      int N, const std::vector<double>& eps_list,
                                      const SolveOptions& opts, int size_cap) {
  std::vector<AprioriRow> rows;
  for (double eps : eps_list) {
    const Mesh mesh = build_micro_mesh(g, N, eps, size_cap);
    const ReducedSystem sys = assemble_micro(mesh, coeffs);
    const MicroSolution sol = solve_micro(mesh, sys, opts);
    AprioriRow row;
    row.epsilon = eps;
    row.vnorm = sol.vnorm;
    row.fnorm = source_norm(mesh, coeffs);
    row.ratio = row.fnorm > 0.0 ? row.vnorm / row.fnorm : 0.0;
    row.ritz_min = sol.report.ritz_min;
    row.dofs = sys.n_red();
    rows.push_back(row);
  }
  return rows;
}

void write_apriori_csv(const std::vector<AprioriRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write " + path);
  out << "epsilon,vnorm,fnorm,ratio,ritz_min\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.epsilon,
                  r.vnorm, r.fnorm, r.ratio, r.ritz_min);
    out << buf;
  }
}

void export_micro_solution(const MicroSolution& sol, const std::string& dir) {
  std::filesystem::create_directories(dir);
  char name[64];
  std::snprintf(name, sizeof name, "micro_u_%g.csv", sol.epsilon);
  const std::string path = dir + "/" + name;
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write " + path);
  out << "vertex,x1,x2,phase,value\n";
  const Mesh& mesh = *sol.mesh;
  char buf[140];
  for (int v = 0; v < mesh.n_verts(); ++v) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%d,%.17g\n", v, mesh.verts[v].x,
                  mesh.verts[v].y, static_cast<int>(mesh.vphase[v]), sol.u[v]);
    out << buf;
  }
}

}  // namespace bhom
