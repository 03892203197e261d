#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bhom/cell_problems.hpp"
#include "bhom/coefficients.hpp"
#include "bhom/effective.hpp"
#include "bhom/macro.hpp"
#include "bhom/micro.hpp"

namespace bhom {

/// Full pipeline configuration. Parsed from sectioned key=value text
/// ([geometry] [cell] [macro] [micro] [coefficients] [solver] [output],
/// '#' comments, UTF-8). Defaults reproduce the reference laminate setup.
struct RunConfig {
  GeometrySpec geom;
  int n_cell = 64;
  int n_macro = 16;
  int n_micro = 8;
  std::vector<double> eps_list{0.25, 0.125, 0.0625};
  CoefficientSet coeffs = CoefficientSet::defaults();
  SolveOptions solver;
  double compat_tol = 1e-8;
  SignConvention convention = SignConvention::remark_consistent;
  GammaSign gamma_sign = GammaSign::flux_split;
  int validation_grid = 64;
  int alpha_quad_n = 256;
  int size_cap = 512;
  std::string out_dir = "out";

  // raw expression texts, echoed back verbatim by the resolved-config writer
  std::string A1_text[2][2], A2_text[2][2];
  std::string a1_text, a2_text, alpha_text, f1_text, f2_text;

  bool operator==(const RunConfig& o) const;
};

RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Re-parseable echo of the resolved configuration (defaults applied).
std::string resolved_config_text(const RunConfig& cfg);

/// P1 evaluation of the macro fields at every micro vertex of the matching
/// phase (u1 at phase-1 vertices, u2 at phase-2 vertices; the off-phase
/// entries carry the other field so jumps are available pointwise).
struct MacroOnMicro {
  Field u1, u2;  // both macro fields evaluated at every micro vertex
};
MacroOnMicro interpolate_macro_on_micro(const MacroSolution& macro, const Mesh& micro);

/// Relative L2(Omega_i^eps) errors of the micro fields against the
/// interpolated macro fields, with a 1e-14 floor on the denominators.
std::pair<double, double> l2_errors(const Mesh& micro, const Field& u_micro,
                                    const MacroOnMicro& interp);

/// First-order corrector reconstruction at the micro vertices:
///   u_i(x) + eps * [ sum_k xi_i^k(x/eps) du_i/dx_k (x)
///                    + gamma_i(x/eps) (u1(x) - u2(x)) ]
/// with the elementwise-constant macro gradient of the containing element.
Field reconstruct_corrector(const MacroSolution& macro, const Mesh& cell,
                            const CellSolutions& cells, double eps, const Mesh& micro,
                            const MacroOnMicro& interp);

struct ConvergenceRow {
  double epsilon = 0.0;
  double e1 = 0.0, e2 = 0.0;            // relative L2 errors per phase
  double e1_corr = 0.0, e2_corr = 0.0;  // corrector-augmented errors
  int micro_dofs = 0;
  double wall_seconds = 0.0;            // human report only, never in CSVs
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;  // sorted by decreasing epsilon
  std::vector<AprioriRow> apriori;
  EffectiveCoefficients eff;
  bool monotone_e1 = false, monotone_e2 = false;
  bool corrector_ok = false;    // corrector error <= plain error at smallest eps
  bool apriori_band_ok = false; // max ratio / min ratio <= 2
  bool ritz_positive = false;
  std::vector<std::string> notes;  // e.g. disk geometry outside stated hypotheses

  bool all_flags() const {
    return monotone_e1 && monotone_e2 && corrector_ok && apriori_band_ok &&
           ritz_positive;
  }
};

/// Stage-sequential pipeline: validate -> cell -> effective -> macro ->
/// per-eps micro + errors -> report. stop_after_cell ends once effective.csv
/// is written. Artifacts land in cfg.out_dir; numeric CSVs carry no
/// timestamps so identical configs reproduce byte-identical outputs.
ConvergenceReport run_all(const RunConfig& cfg, bool stop_after_cell = false);

/// Stage 1 only (coefficient validation + alpha diagnostics). Returns the
/// validation report; throws on hard violations.
ValidationReport run_validate(const RunConfig& cfg);

void write_report_csv(const ConvergenceReport& rep, const std::string& path);
void write_report_txt(const ConvergenceReport& rep, const std::string& path);

}  // namespace bhom
