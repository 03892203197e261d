#pragma once

#include <functional>
#include <vector>

#include "bhom/coefficients.hpp"
#include "bhom/mesh.hpp"
#include "bhom/sparse.hpp"

namespace bhom {

/// P1 assembly of the weak-form ingredients. Volume terms use the 3-point
/// edge-midpoint rule (degree-2 exact); interface terms the 2-point Gauss
/// rule per edge. Coefficients are evaluated at mesh.to_cell_coords(x), i.e.
/// at y on the unit cell and at wrap(x/epsilon) on micro meshes. All matrices
/// live on the full vertex dof space of the mesh.

/// Stiffness sum_T int_T (A grad(phi_q)) . grad(phi_p) over phase-tagged triangles.
SparseMatrix assemble_stiffness(const Mesh& mesh, const Matrix2Expr& A, int phase);
SparseMatrix assemble_stiffness_const(const Mesh& mesh, const Mat2& A, int phase);

/// Mass sum_T int_T a phi_q phi_p.
SparseMatrix assemble_mass(const Mesh& mesh, const Expression& a, int phase);
SparseMatrix assemble_mass_const(const Mesh& mesh, double a, int phase);

/// Convection int (B . grad(phi_q)) phi_p with elementwise-constant gradient.
SparseMatrix assemble_convection_const(const Mesh& mesh, Vec2 B, int phase);

/// Interface coupling int_Sigma alpha (w1 - w2)(v1 - v2): +alpha on same-side
/// blocks, -alpha on cross blocks of the twin trace dofs. The surface measure
/// carries no epsilon weight on micro meshes.
SparseMatrix assemble_interface_coupling(const Mesh& mesh, const Expression& alpha);
SparseMatrix assemble_interface_coupling_const(const Mesh& mesh, double alpha);

/// Interface load L[p] = sign * int_Sigma alpha phi_p over the phase-side trace.
std::vector<double> assemble_interface_load(const Mesh& mesh, const Expression& alpha,
                                            int phase, double sign);

/// Volume load int f phi_p; f evaluated at the physical point x.
std::vector<double> assemble_load(const Mesh& mesh, const Expression& f, int phase);
std::vector<double> assemble_load_fn(const Mesh& mesh,
                                     const std::function<double(Vec2)>& f, int phase);

/// Row sums of the unit mass matrix: nodal lumped areas of the phase.
std::vector<double> lumped_mass_weights(const Mesh& mesh, int phase);

/// RHS for the corrector problems: b[p] = -sum_T int_T (A e_k) . grad(phi_p).
std::vector<double> assemble_xi_rhs(const Mesh& mesh, const Matrix2Expr& A, int phase,
                                    int k);

/// int over the phase of f (3-point rule), for norms and averages.
double integrate_phase(const Mesh& mesh, int phase,
                       const std::function<double(Vec2)>& f);

/// int over the interface of f(point, normal) (2-point rule).
double integrate_interface(const Mesh& mesh,
                           const std::function<double(Vec2, Vec2)>& f);

/// L2(phase)^2 of the P1 field (exact for P1: the integrand is quadratic).
double l2sq_phase(const Mesh& mesh, int phase, const std::vector<double>& u);
/// H1 seminorm^2 over the phase.
double h1sq_phase(const Mesh& mesh, int phase, const std::vector<double>& u);
/// L2(Sigma)^2 of the interface jump u1 - u2 of the duplicated-trace field.
double jump_l2sq(const Mesh& mesh, const std::vector<double>& u);

}  // namespace bhom
