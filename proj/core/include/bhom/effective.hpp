#pragma once

#include <array>
#include <string>
#include <vector>

#include "bhom/cell_problems.hpp"
#include "bhom/coefficients.hpp"
#include "bhom/mesh.hpp"

namespace bhom {

/// Sign applied to the volume term of the convection vectors
///   b_i^k = sigma_i [int_{Y_i} A_i grad gamma_i]_k + int_Sigma alpha xi_i^k.
/// remark_consistent (default): sigma_i = (-1)^i, under which B_i vanishes
/// for symmetric A_i (the two terms cancel by the discrete Galerkin
/// identity). paper_literal: sigma_i = (-1)^(i-1), under which the terms
/// coincide instead and b_i^k = 2 int_Sigma alpha xi_i^k for symmetric A_i.
/// Both are kept so the discrepancy is surfaced, not silently resolved.
enum class SignConvention { remark_consistent, paper_literal };

const char* sign_convention_name(SignConvention c);

struct EffectiveCoefficients {
  std::array<Mat2, 2> Aeff;
  std::array<Vec2, 2> B;
  double d = 0.0;
  std::array<double, 2> c{0.0, 0.0};
  std::array<double, 2> vol{0.0, 0.0};
  SignConvention convention = SignConvention::remark_consistent;

  // provenance + self-checks
  int n_cell = 0;
  std::string geom_hash;
  double energy_flux_gap = 0.0;  // max |energy form - flux form| over entries
  std::vector<std::string> warnings;
};

/// Effective conductivities a_i^{kj} = int_{Y_i} A (e_k + grad xi^k) . (e_j +
/// grad xi^j), cross-checked against the flux form int (A (e_k + grad xi^k)) . e_j
/// (equal by Galerkin orthogonality; a gap > 1e-8 raises a warning).
std::array<Mat2, 2> compute_Aeff(const Mesh& cell, const CellSolutions& sols,
                                 const CoefficientSet& coeffs, double* max_gap = nullptr,
                                 std::vector<std::string>* warnings = nullptr);

std::array<Vec2, 2> compute_B(const Mesh& cell, const CellSolutions& sols,
                              const CoefficientSet& coeffs, SignConvention convention);

/// d = int_Sigma alpha (gamma_1 - gamma_2), each gamma from its own phase
/// trace; c_i = d + int_{Y_i} a_i.
void compute_d_c(const Mesh& cell, const CellSolutions& sols,
                 const CoefficientSet& coeffs, double& d, std::array<double, 2>& c);

/// Macro source g_i(x) = |Y_i| f_i(x) as a scaled expression.
Expression compute_g(const Expression& f, double vol);

/// Full effective-coefficient computation with metadata.
///
/// When two_level options are supplied, d is computed by Richardson
/// extrapolation over this cell resolution and its half: the plain interface
/// quadrature of d carries exactly the squared energy error of the gamma
/// solves (Galerkin identity), a one-sided O(h^2) defect that the two-level
/// combination (4 d_N - d_{N/2}) / 3 eliminates. Falls back to the plain
/// value (with a warning) when the half resolution is incompatible with the
/// geometry.
EffectiveCoefficients compute_effective(const Mesh& cell, const CellSolutions& sols,
                                        const CoefficientSet& coeffs,
                                        SignConvention convention,
                                        const CellSolveOptions* two_level = nullptr);

/// effective.csv: one row per scalar (name, i, j, value, convention, N, hash).
void write_effective_csv(const EffectiveCoefficients& eff, const std::string& path);

}  // namespace bhom
