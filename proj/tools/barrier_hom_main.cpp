// barrier-hom: numerical homogenization of steady diffusion through a
// two-phase periodic composite with an imperfect (temperature-jump)
// interface. Subcommands:
//   run <config>       full pipeline: cell -> effective -> macro -> micro sweep
//   cell <config>      stop after the effective coefficients
//   validate <config>  coefficient validation + resistivity diagnostics only
//
// Exit codes: 0 success, 2 validation failure, 3 solver failure,
// 4 convergence-flag failure.

#include <cstdio>
#include <exception>

#include <CLI11.hpp>

#include "bhom/harness.hpp"

namespace {

int exit_code_for(bhom::Errc c) {
  using bhom::Errc;
  switch (c) {
    case Errc::parse_error:
    case Errc::unknown_symbol:
    case Errc::zero_literal_divisor:
    case Errc::eval_error:
    case Errc::ellipticity_violation:
    case Errc::positivity_violation:
    case Errc::compat_violation:
    case Errc::geometry_error:
    case Errc::size_cap_exceeded:
    case Errc::config_error:
      return 2;
    case Errc::solver_failure:
    case Errc::indefinite_form:
      return 3;
    default:
      return 1;
  }
}

int run_mode(const std::string& config_path, bool stop_after_cell) {
  const bhom::RunConfig cfg = bhom::parse_config_file(config_path);
  const bhom::ConvergenceReport rep = bhom::run_all(cfg, stop_after_cell);
  std::printf("effective tensors written to %s/effective.csv\n", cfg.out_dir.c_str());
  if (stop_after_cell) return 0;
  std::printf("report written to %s/report.txt\n", cfg.out_dir.c_str());
  for (const auto& n : rep.notes) std::printf("note: %s\n", n.c_str());
  if (!rep.all_flags()) {
    std::fprintf(stderr, "one or more convergence flags failed; see report.txt\n");
    return 4;
  }
  return 0;
}

int validate_mode(const std::string& config_path) {
  const bhom::RunConfig cfg = bhom::parse_config_file(config_path);
  const bhom::ValidationReport rep = bhom::run_validate(cfg);
  std::printf("ellipticity bounds: m1 = %.6g, M1 = %.6g, m2 = %.6g, M2 = %.6g\n", rep.m1,
              rep.M1, rep.m2, rep.M2);
  std::printf("reaction lower bounds: eta1 = %.6g, eta2 = %.6g\n", rep.eta1, rep.eta2);
  const bhom::AlphaDiagnostics ad =
      bhom::alpha_diagnostics(cfg.coeffs.alpha, cfg.geom, cfg.alpha_quad_n);
  std::printf("alpha on Sigma: mean = %.6g, positive-part min on support = %.6g, "
              "negative-part sup = %.6g\n",
              ad.mean_on_sigma, ad.alpha_plus_min_on_support, ad.alpha_minus_sup);
  for (const auto& w : rep.warnings) std::printf("warning: %s\n", w.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical homogenization for two-phase composites with an "
               "imperfect interface"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "full pipeline with the epsilon sweep");
  run->add_option("config", config_path, "configuration file")->required();
  auto* cell = app.add_subcommand("cell", "stop after the effective coefficients");
  cell->add_option("config", config_path, "configuration file")->required();
  auto* validate = app.add_subcommand("validate", "input validation only");
  validate->add_option("config", config_path, "configuration file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_mode(config_path, false);
    if (cell->parsed()) return run_mode(config_path, true);
    return validate_mode(config_path);
  } catch (const bhom::Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", bhom::errc_name(e.code), e.what());
    return exit_code_for(e.code);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
