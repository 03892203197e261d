#include "bhom/assemble.hpp"

#include <cmath>

#include "bhom/errors.hpp"

namespace bhom {

namespace {

// 3-point edge-midpoint rule: degree-2 exact on triangles. P1 shape values at
// the midpoint opposite vertex i are {0 at i, 1/2 at the others}.
constexpr double kMidShape[3][3] = {
    {0.5, 0.5, 0.0},  // midpoint of edge (0,1)
    {0.0, 0.5, 0.5},  // midpoint of edge (1,2)
    {0.5, 0.0, 0.5},  // midpoint of edge (2,0)
};

template <typename CoeffFn>
void stiffness_impl(const Mesh& mesh, int phase, TripletList& out, CoeffFn A_at) {
  for (int t = 0; t < mesh.n_tris(); ++t) {
    if (mesh.tphase[t] != phase) continue;
    const auto& tr = mesh.tris[t];
    const auto g = mesh.tri_grads(t);
    const double w = mesh.tri_area(t) / 3.0;
    Mat2 Asum;
    for (int e = 0; e < 3; ++e) {
      const Vec2 mid = (mesh.verts[tr[e]] + mesh.verts[tr[(e + 1) % 3]]) * 0.5;
      const Mat2 A = A_at(mesh.to_cell_coords(mid));
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) Asum(i, j) += A(i, j);
    }
    // grad(phi) constant: the three quadrature points only average A.
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q)
        out.add(tr[p], tr[q], w * Asum.apply(g[q]).dot(g[p]));
  }
}

template <typename CoeffFn>
void mass_impl(const Mesh& mesh, int phase, TripletList& out, CoeffFn a_at) {
  for (int t = 0; t < mesh.n_tris(); ++t) {
    if (mesh.tphase[t] != phase) continue;
    const auto& tr = mesh.tris[t];
    const double w = mesh.tri_area(t) / 3.0;
    for (int e = 0; e < 3; ++e) {
      const Vec2 mid = (mesh.verts[tr[e]] + mesh.verts[tr[(e + 1) % 3]]) * 0.5;
      const double a = a_at(mesh.to_cell_coords(mid));
      for (int p = 0; p < 3; ++p) {
        if (kMidShape[e][p] == 0.0) continue;
        for (int q = 0; q < 3; ++q) {
          if (kMidShape[e][q] == 0.0) continue;
          out.add(tr[p], tr[q], w * a * kMidShape[e][p] * kMidShape[e][q]);
        }
      }
    }
  }
}

}  // namespace

SparseMatrix assemble_stiffness(const Mesh& mesh, const Matrix2Expr& A, int phase) {
  TripletList out(mesh.n_verts());
  stiffness_impl(mesh, phase, out, [&](Vec2 y) {
    Mat2 m;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m(i, j) = A[i][j].eval(y);
    return m;
  });
  return out.build();
}

SparseMatrix assemble_stiffness_const(const Mesh& mesh, const Mat2& A, int phase) {
  TripletList out(mesh.n_verts());
  stiffness_impl(mesh, phase, out, [&](Vec2) { return A; });
  return out.build();
}

SparseMatrix assemble_mass(const Mesh& mesh, const Expression& a, int phase) {
  TripletList out(mesh.n_verts());
  mass_impl(mesh, phase, out, [&](Vec2 y) { return a.eval(y); });
  return out.build();
}

SparseMatrix assemble_mass_const(const Mesh& mesh, double a, int phase) {
  TripletList out(mesh.n_verts());
  mass_impl(mesh, phase, out, [&](Vec2) { return a; });
  return out.build();
}

SparseMatrix assemble_convection_const(const Mesh& mesh, Vec2 B, int phase) {
  TripletList out(mesh.n_verts());
  for (int t = 0; t < mesh.n_tris(); ++t) {
    if (mesh.tphase[t] != phase) continue;
    const auto& tr = mesh.tris[t];
    const auto g = mesh.tri_grads(t);
    const double third = mesh.tri_area(t) / 3.0;  // int of each P1 hat over the triangle
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q) out.add(tr[p], tr[q], third * B.dot(g[q]));
  }
  return out.build();
}

SparseMatrix assemble_interface_coupling(const Mesh& mesh, const Expression& alpha) {
  TripletList out(mesh.n_verts());
  if (mesh.iface.empty()) return out.build();
  for (const auto& qp : interface_quadrature(mesh)) {
    const auto& e = mesh.iface[qp.edge];
    const double a = alpha.eval(mesh.to_cell_coords(qp.point));
    const auto sh = edge_shape(qp.s);
    const int dof[4] = {e.a1, e.b1, e.a2, e.b2};
    const double val[4] = {sh[0], sh[1], -sh[0], -sh[1]};  // jump w1 - w2
    for (int p = 0; p < 4; ++p)
      for (int q = 0; q < 4; ++q)
        out.add(dof[p], dof[q], qp.weight * a * val[p] * val[q]);
  }
  return out.build();
}

SparseMatrix assemble_interface_coupling_const(const Mesh& mesh, double alpha) {
  Expression a = ExprBuilder::constant(alpha, SymbolDomain::cell);
  return assemble_interface_coupling(mesh, a);
}

std::vector<double> assemble_interface_load(const Mesh& mesh, const Expression& alpha,
                                            int phase, double sign) {
  std::vector<double> L(mesh.n_verts(), 0.0);
  for (const auto& qp : interface_quadrature(mesh)) {
    const auto& e = mesh.iface[qp.edge];
    const double a = alpha.eval(mesh.to_cell_coords(qp.point));
    const auto sh = edge_shape(qp.s);
    const int a_dof = phase == 1 ? e.a1 : e.a2;
    const int b_dof = phase == 1 ? e.b1 : e.b2;
    L[a_dof] += sign * qp.weight * a * sh[0];
    L[b_dof] += sign * qp.weight * a * sh[1];
  }
  return L;
}

std::vector<double> assemble_load(const Mesh& mesh, const Expression& f, int phase) {
  return assemble_load_fn(mesh, [&](Vec2 x) { return f.eval(x); }, phase);
}

std::vector<double> assemble_load_fn(const Mesh& mesh,
                                     const std::function<double(Vec2)>& f, int phase) {
  std::vector<double> L(mesh.n_verts(), 0.0);
  for (int t = 0; t < mesh.n_tris(); ++t) {
    if (mesh.tphase[t] != phase) continue;
    const auto& tr = mesh.tris[t];
    const double w = mesh.tri_area(t) / 3.0;
    for (int e = 0; e < 3; ++e) {
      const Vec2 mid = (mesh.verts[tr[e]] + mesh.verts[tr[(e + 1) % 3]]) * 0.5;
      const double v = f(mid);
      for (int p = 0; p < 3; ++p) L[tr[p]] += w * v * kMidShape[e][p];
    }
  }
  return L;
}

std::vector<double> lumped_mass_weights(const Mesh& mesh, int phase) {
  std::vector<double> w(mesh.n_verts(), 0.0);
  for (int t = 0; t < mesh.n_tris(); ++t) {
    if (mesh.tphase[t] != phase) continue;
    const double third = mesh.tri_area(t) / 3.0;
    for (int v : mesh.tris[t]) w[v] += third;
  }
  return w;
}

std::vector<double> assemble_xi_rhs(const Mesh& mesh, const Matrix2Expr& A, int phase,
                                    int k) {
  if (k != 1 && k != 2) throw Error(Errc::internal_error, "k must be 1 or 2");
  const Vec2 ek = k == 1 ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
  std::vector<double> b(mesh.n_verts(), 0.0);
  for (int t = 0; t < mesh.n_tris(); ++t) {
    if (mesh.tphase[t] != phase) continue;
    const auto& tr = mesh.tris[t];
    const auto g = mesh.tri_grads(t);
    const double w = mesh.tri_area(t) / 3.0;
    for (int e = 0; e < 3; ++e) {
      const Vec2 mid = (mesh.verts[tr[e]] + mesh.verts[tr[(e + 1) % 3]]) * 0.5;
      const Vec2 y = mesh.to_cell_coords(mid);
      Mat2 Am;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) Am(i, j) = A[i][j].eval(y);
      const Vec2 Aek = Am.apply(ek);
      for (int p = 0; p < 3; ++p) b[tr[p]] -= w * Aek.dot(g[p]);
    }
  }
  return b;
}

double integrate_phase(const Mesh& mesh, int phase,
                       const std::function<double(Vec2)>& f) {
  double s = 0.0;
  for (int t = 0; t < mesh.n_tris(); ++t) {
    if (mesh.tphase[t] != phase) continue;
    const auto& tr = mesh.tris[t];
    const double w = mesh.tri_area(t) / 3.0;
    for (int e = 0; e < 3; ++e)
      s += w * f((mesh.verts[tr[e]] + mesh.verts[tr[(e + 1) % 3]]) * 0.5);
  }
  return s;
}

double integrate_interface(const Mesh& mesh,
                           const std::function<double(Vec2, Vec2)>& f) {
  double s = 0.0;
  for (const auto& qp : interface_quadrature(mesh)) s += qp.weight * f(qp.point, qp.normal);
  return s;
}

double l2sq_phase(const Mesh& mesh, int phase, const std::vector<double>& u) {
  double s = 0.0;
  for (int t = 0; t < mesh.n_tris(); ++t) {
    if (mesh.tphase[t] != phase) continue;
    const auto& tr = mesh.tris[t];
    const double w = mesh.tri_area(t) / 3.0;
    for (int e = 0; e < 3; ++e) {
      double v = 0.0;
      for (int p = 0; p < 3; ++p) v += kMidShape[e][p] * u[tr[p]];
      s += w * v * v;
    }
  }
  return s;
}

double h1sq_phase(const Mesh& mesh, int phase, const std::vector<double>& u) {
  double s = 0.0;
  for (int t = 0; t < mesh.n_tris(); ++t) {
    if (mesh.tphase[t] != phase) continue;
    const auto& tr = mesh.tris[t];
    const auto g = mesh.tri_grads(t);
    Vec2 gr{0.0, 0.0};
    for (int p = 0; p < 3; ++p) gr = gr + g[p] * u[tr[p]];
    s += mesh.tri_area(t) * gr.dot(gr);
  }
  return s;
}

double jump_l2sq(const Mesh& mesh, const std::vector<double>& u) {
  double s = 0.0;
  for (const auto& qp : interface_quadrature(mesh)) {
    const auto& e = mesh.iface[qp.edge];
    const auto sh = edge_shape(qp.s);
    const double j = sh[0] * (u[e.a1] - u[e.a2]) + sh[1] * (u[e.b1] - u[e.b2]);
    s += qp.weight * j * j;
  }
  return s;
}

}  // namespace bhom
