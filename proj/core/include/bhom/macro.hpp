#pragma once

#include <string>
#include <vector>

#include "bhom/constraints.hpp"
#include "bhom/effective.hpp"
#include "bhom/mesh.hpp"
#include "bhom/solve.hpp"

namespace bhom {

/// Homogenized coupled system on Omega with homogeneous Dirichlet data:
///   -div(Aeff_1 grad u1) + B1.grad u1 - B2.grad u2 + c1 u1 - d u2 = g1
///   -div(Aeff_2 grad u2) + B2.grad u2 - B1.grad u1 + c2 u2 - d u1 = g2
/// Galerkin P1 on a single-valued square mesh, no upwinding.

struct MacroSolution {
  const Mesh* mesh = nullptr;
  Field u1, u2;
  SolveReport report;
};

struct MacroSystem {
  ReducedSystem sys;
  int n_verts = 0;  // dof layout: u1 = [0,n), u2 = [n,2n)
  std::vector<std::string> warnings;  // e.g. mesh-Peclet warning
};

MacroSystem assemble_macro(const Mesh& mesh, const EffectiveCoefficients& eff,
                           const Expression& g1, const Expression& g2);

/// Solves the assembled block system. Breakdown is reported as a possible
/// loss of coercivity with the offending magnitudes (|d|, |B|) in the message.
MacroSolution solve_macro(const Mesh& mesh, const MacroSystem& ms,
                          const EffectiveCoefficients& eff, const SolveOptions& opts);

/// macro_u1.csv / macro_u2.csv (vertex id, x1, x2, value).
void export_macro_solution(const MacroSolution& sol, const std::string& dir);

}  // namespace bhom
