#include "bhom/effective.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "bhom/assemble.hpp"
#include "bhom/errors.hpp"

namespace bhom {

namespace {

// int_Sigma alpha * (phase trace of the P1 field) under the mesh quadrature.
double interface_alpha_field(const Mesh& cell, const Expression& alpha, const Field& f,
                             int phase) {
  double s = 0.0;
  for (const auto& qp : interface_quadrature(cell)) {
    const auto& e = cell.iface[qp.edge];
    const auto sh = edge_shape(qp.s);
    const double tr = phase == 1 ? sh[0] * f[e.a1] + sh[1] * f[e.b1]
                                 : sh[0] * f[e.a2] + sh[1] * f[e.b2];
    s += qp.weight * alpha.eval(cell.to_cell_coords(qp.point)) * tr;
  }
  return s;
}

}  // namespace

const char* sign_convention_name(SignConvention c) {
  return c == SignConvention::remark_consistent ? "remark-consistent" : "paper-literal";
}

std::array<Mat2, 2> compute_Aeff(const Mesh& cell, const CellSolutions& sols,
                                 const CoefficientSet& coeffs, double* max_gap,
                                 std::vector<std::string>* warnings) {
  std::array<Mat2, 2> out;
  double gap = 0.0;
  for (int i = 0; i < 2; ++i) {
    const Matrix2Expr& A = i == 0 ? coeffs.A1 : coeffs.A2;
    Mat2 energy, flux;
    for (int t = 0; t < cell.n_tris(); ++t) {
      if (cell.tphase[t] != i + 1) continue;
      const auto& tr = cell.tris[t];
      const auto g = cell.tri_grads(t);
      Vec2 grads[2];
      for (int k = 0; k < 2; ++k) {
        Vec2 gr{0.0, 0.0};
        for (int p = 0; p < 3; ++p) gr = gr + g[p] * sols.xi[i][k][tr[p]];
        grads[k] = gr;
      }
      const Vec2 corr[2] = {Vec2{1.0, 0.0} + grads[0], Vec2{0.0, 1.0} + grads[1]};
      const double w = cell.tri_area(t) / 3.0;
      for (int e = 0; e < 3; ++e) {
        const Vec2 mid = (cell.verts[tr[e]] + cell.verts[tr[(e + 1) % 3]]) * 0.5;
        Mat2 Am;
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c) Am(r, c) = A[r][c].eval(mid);
        for (int k = 0; k < 2; ++k) {
          const Vec2 Ak = Am.apply(corr[k]);
          for (int j = 0; j < 2; ++j) {
            energy(k, j) += w * Ak.dot(corr[j]);
            flux(k, j) += w * (j == 0 ? Ak.x : Ak.y);
          }
        }
      }
    }
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < 2; ++j)
        gap = std::max(gap, std::fabs(energy(k, j) - flux(k, j)));
    out[i] = energy;
  }
  if (max_gap) *max_gap = gap;
  if (gap > 1e-8 && warnings) {
    char buf[120];
    std::snprintf(buf, sizeof buf,
                  "energy and flux forms of the effective tensor differ by %.3g "
                  "(Galerkin identity violated; check solver tolerances)",
                  gap);
    warnings->emplace_back(buf);
  }
  return out;
}

std::array<Vec2, 2> compute_B(const Mesh& cell, const CellSolutions& sols,
                              const CoefficientSet& coeffs, SignConvention convention) {
  std::array<Vec2, 2> out;
  for (int i = 0; i < 2; ++i) {
    const Matrix2Expr& A = i == 0 ? coeffs.A1 : coeffs.A2;
    // Volume term int_{Y_i} A grad(gamma_i).
    Vec2 vol{0.0, 0.0};
    for (int t = 0; t < cell.n_tris(); ++t) {
      if (cell.tphase[t] != i + 1) continue;
      const auto& tr = cell.tris[t];
      const auto g = cell.tri_grads(t);
      Vec2 gr{0.0, 0.0};
      for (int p = 0; p < 3; ++p) gr = gr + g[p] * sols.gamma[i][tr[p]];
      const double w = cell.tri_area(t) / 3.0;
      for (int e = 0; e < 3; ++e) {
        const Vec2 mid = (cell.verts[tr[e]] + cell.verts[tr[(e + 1) % 3]]) * 0.5;
        Mat2 Am;
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c) Am(r, c) = A[r][c].eval(mid);
        vol = vol + Am.apply(gr) * w;
      }
    }
    const double sigma = convention == SignConvention::paper_literal
                             ? (i == 0 ? 1.0 : -1.0)    // (-1)^(i-1), i in {1,2}
                             : (i == 0 ? -1.0 : 1.0);   // (-1)^i
    for (int k = 0; k < 2; ++k) {
      const double iface_term = interface_alpha_field(cell, coeffs.alpha, sols.xi[i][k], i + 1);
      const double v = k == 0 ? vol.x : vol.y;
      (k == 0 ? out[i].x : out[i].y) = sigma * v + iface_term;
    }
  }
  return out;
}

void compute_d_c(const Mesh& cell, const CellSolutions& sols,
                 const CoefficientSet& coeffs, double& d, std::array<double, 2>& c) {
  d = interface_alpha_field(cell, coeffs.alpha, sols.gamma[0], 1) -
      interface_alpha_field(cell, coeffs.alpha, sols.gamma[1], 2);
  for (int i = 0; i < 2; ++i) {
    const Expression& a = i == 0 ? coeffs.a1 : coeffs.a2;
    const double vol_int =
        integrate_phase(cell, i + 1, [&](Vec2 y) { return a.eval(y); });
    c[i] = d + vol_int;
  }
}

Expression compute_g(const Expression& f, double vol) {
  return ExprBuilder::scaled(vol, f);
}

EffectiveCoefficients compute_effective(const Mesh& cell, const CellSolutions& sols,
                                        const CoefficientSet& coeffs,
                                        SignConvention convention,
                                        const CellSolveOptions* two_level) {
  EffectiveCoefficients eff;
  eff.convention = convention;
  eff.n_cell = cell.grid_n;
  eff.geom_hash = geometry_hash(cell.geom, cell.grid_n);
  eff.vol = cell.phase_area;
  eff.Aeff = compute_Aeff(cell, sols, coeffs, &eff.energy_flux_gap, &eff.warnings);
  eff.B = compute_B(cell, sols, coeffs, convention);
  compute_d_c(cell, sols, coeffs, eff.d, eff.c);
  if (two_level != nullptr) {
    bool done = false;
    if (cell.grid_n % 2 == 0 && cell.grid_n / 2 >= 4) {
      try {
        CellSolveOptions copts = *two_level;
        copts.gamma_sign = sols.sign;
        const Mesh coarse = build_unit_cell_mesh(cell.geom, cell.grid_n / 2);
        CellSolutions cs;
        cs.sign = sols.sign;
        for (int i = 0; i < 2; ++i) {
          const Matrix2Expr& A = i == 0 ? coeffs.A1 : coeffs.A2;
          auto [f, rep] = solve_gamma(coarse, A, coeffs.alpha, i + 1, copts);
          cs.gamma[i] = std::move(f);
          cs.gamma_reports[i] = rep;
          cs.xi[i][0].assign(coarse.n_verts(), 0.0);
          cs.xi[i][1].assign(coarse.n_verts(), 0.0);
        }
        double d_coarse;
        std::array<double, 2> c_unused;
        compute_d_c(coarse, cs, coeffs, d_coarse, c_unused);
        const double d_plain = eff.d;
        eff.d = (4.0 * d_plain - d_coarse) / 3.0;
        for (int i = 0; i < 2; ++i) eff.c[i] += eff.d - d_plain;
        done = true;
      } catch (const Error&) {
        done = false;
      }
    }
    if (!done)
      eff.warnings.emplace_back(
          "two-level extrapolation of d unavailable at this resolution; "
          "using the single-level quadrature value");
  }
  for (int i = 0; i < 2; ++i) {
    const double lo = min_eig_sym(eff.Aeff[i]);
    if (lo < 1e-12) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "effective tensor of phase %d is degenerate (min eigenvalue %.3g); "
                    "transport in that direction vanishes at leading order",
                    i + 1, lo);
      eff.warnings.emplace_back(buf);
    }
  }
  return eff;
}

void write_effective_csv(const EffectiveCoefficients& eff, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write " + path);
  out << "name,i,j,value,convention,n_cell,geometry\n";
  char buf[160];
  const char* conv = sign_convention_name(eff.convention);
  auto row = [&](const char* name, int i, int j, double v) {
    std::snprintf(buf, sizeof buf, "%s,%d,%d,%.17g,%s,%d,%s\n", name, i, j, v, conv,
                  eff.n_cell, eff.geom_hash.c_str());
    out << buf;
  };
  // Aeff entry (k,j) of phase i is encoded as i, kj (11,12,21,22).
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < 2; ++j)
        row("Aeff", i + 1, 10 * (k + 1) + (j + 1), eff.Aeff[i](k, j));
  for (int i = 0; i < 2; ++i) {
    row("B", i + 1, 1, eff.B[i].x);
    row("B", i + 1, 2, eff.B[i].y);
  }
  row("d", 0, 0, eff.d);
  row("c", 1, 0, eff.c[0]);
  row("c", 2, 0, eff.c[1]);
  row("vol", 1, 0, eff.vol[0]);
  row("vol", 2, 0, eff.vol[1]);
}

}  // namespace bhom
