#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bhom/harness.hpp"

namespace bhom {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw Error(Errc::config_error, "config line " + std::to_string(line) + ": " + msg);
}

double parse_real(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) fail(line, "malformed number '" + v + "'");
    return x;
  } catch (const Error&) {
    throw;
  } catch (...) {
    fail(line, "malformed number '" + v + "'");
  }
}

int parse_int(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    const int x = std::stoi(v, &used);
    if (used != v.size()) fail(line, "malformed integer '" + v + "'");
    return x;
  } catch (const Error&) {
    throw;
  } catch (...) {
    fail(line, "malformed integer '" + v + "'");
  }
}

// Accepts "0.125" or "1/8"; must be the reciprocal of a positive integer.
double parse_eps(const std::string& v, int line) {
  double eps;
  const std::size_t slash = v.find('/');
  if (slash != std::string::npos) {
    const double num = parse_real(trim(v.substr(0, slash)), line);
    const double den = parse_real(trim(v.substr(slash + 1)), line);
    if (den == 0.0) fail(line, "zero denominator in '" + v + "'");
    eps = num / den;
  } else {
    eps = parse_real(v, line);
  }
  if (!(eps > 0.0) || eps > 1.0) fail(line, "epsilon must lie in (0, 1]");
  const double K = 1.0 / eps;
  if (std::fabs(K - std::lround(K)) > 1e-9)
    fail(line, "epsilon = " + v + " is not the reciprocal of an integer");
  return 1.0 / static_cast<double>(std::lround(K));
}

Expression parse_expr_or_fail(const std::string& v, SymbolDomain dom, int line,
                              const std::string& key) {
  try {
    return parse_expression(v, dom);
  } catch (const Error& e) {
    fail(line, "while parsing " + key + " = '" + v + "': " + e.what());
  }
}

}  // namespace

bool RunConfig::operator==(const RunConfig& o) const {
  auto expr_eq = [](const Expression& a, const Expression& b) { return a.identical(b); };
  bool coeffs_eq = expr_eq(coeffs.a1, o.coeffs.a1) && expr_eq(coeffs.a2, o.coeffs.a2) &&
                   expr_eq(coeffs.alpha, o.coeffs.alpha) &&
                   expr_eq(coeffs.f1, o.coeffs.f1) && expr_eq(coeffs.f2, o.coeffs.f2);
  for (int i = 0; i < 2 && coeffs_eq; ++i)
    for (int j = 0; j < 2 && coeffs_eq; ++j)
      coeffs_eq = expr_eq(coeffs.A1[i][j], o.coeffs.A1[i][j]) &&
                  expr_eq(coeffs.A2[i][j], o.coeffs.A2[i][j]);
  return coeffs_eq && geom.kind == o.geom.kind && geom.theta == o.geom.theta &&
         geom.radius == o.geom.radius && geom.n_seg == o.geom.n_seg &&
         n_cell == o.n_cell && n_macro == o.n_macro && n_micro == o.n_micro &&
         eps_list == o.eps_list && solver.tol == o.solver.tol &&
         solver.max_iter == o.solver.max_iter &&
         solver.direct_dim_cap == o.solver.direct_dim_cap &&
         compat_tol == o.compat_tol && convention == o.convention &&
         gamma_sign == o.gamma_sign && validation_grid == o.validation_grid &&
         alpha_quad_n == o.alpha_quad_n && size_cap == o.size_cap && out_dir == o.out_dir;
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  // Remember which coefficient keys were given; others keep their defaults.
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;

  auto geometry_key = [&](const std::string& k, const std::string& v) {
    if (k == "kind") {
      if (v == "laminate")
        cfg.geom.kind = CellKind::laminate;
      else if (v == "disk")
        cfg.geom.kind = CellKind::disk;
      else
        fail(line, "unknown geometry kind '" + v + "' (laminate | disk)");
    } else if (k == "theta") {
      cfg.geom.theta = parse_real(v, line);
    } else if (k == "radius") {
      cfg.geom.radius = parse_real(v, line);
    } else if (k == "n_seg") {
      cfg.geom.n_seg = parse_int(v, line);
    } else {
      fail(line, "unknown key '" + k + "' in [geometry]");
    }
  };

  auto coeff_key = [&](const std::string& k, const std::string& v) {
    auto cell_expr = [&]() { return parse_expr_or_fail(v, SymbolDomain::cell, line, k); };
    auto macro_expr = [&]() { return parse_expr_or_fail(v, SymbolDomain::macro, line, k); };
    if (k.size() == 5 && k.compare(0, 2, "A1") == 0 && k[2] == '_') {
      const int i = k[3] - '1', j = k[4] - '1';
      if (i < 0 || i > 1 || j < 0 || j > 1) fail(line, "bad tensor index in '" + k + "'");
      cfg.coeffs.A1[i][j] = cell_expr();
      cfg.A1_text[i][j] = v;
    } else if (k.size() == 5 && k.compare(0, 2, "A2") == 0 && k[2] == '_') {
      const int i = k[3] - '1', j = k[4] - '1';
      if (i < 0 || i > 1 || j < 0 || j > 1) fail(line, "bad tensor index in '" + k + "'");
      cfg.coeffs.A2[i][j] = cell_expr();
      cfg.A2_text[i][j] = v;
    } else if (k == "a1") {
      cfg.coeffs.a1 = cell_expr();
      cfg.a1_text = v;
    } else if (k == "a2") {
      cfg.coeffs.a2 = cell_expr();
      cfg.a2_text = v;
    } else if (k == "alpha") {
      cfg.coeffs.alpha = cell_expr();
      cfg.alpha_text = v;
    } else if (k == "f1") {
      cfg.coeffs.f1 = macro_expr();
      cfg.f1_text = v;
    } else if (k == "f2") {
      cfg.coeffs.f2 = macro_expr();
      cfg.f2_text = v;
    } else {
      fail(line, "unknown key '" + k + "' in [coefficients]");
    }
  };

  auto solver_key = [&](const std::string& k, const std::string& v) {
    if (k == "tol")
      cfg.solver.tol = parse_real(v, line);
    else if (k == "max_iter")
      cfg.solver.max_iter = parse_int(v, line);
    else if (k == "direct_dim_cap")
      cfg.solver.direct_dim_cap = parse_int(v, line);
    else if (k == "compat_tol")
      cfg.compat_tol = parse_real(v, line);
    else if (k == "validation_grid")
      cfg.validation_grid = parse_int(v, line);
    else if (k == "alpha_quad_n")
      cfg.alpha_quad_n = parse_int(v, line);
    else if (k == "sign_convention") {
      if (v == "remark-consistent")
        cfg.convention = SignConvention::remark_consistent;
      else if (v == "paper-literal")
        cfg.convention = SignConvention::paper_literal;
      else
        fail(line, "unknown sign_convention '" + v +
                       "' (remark-consistent | paper-literal)");
    } else if (k == "gamma_sign") {
      if (v == "flux-split" || v == "default")
        cfg.gamma_sign = GammaSign::flux_split;
      else if (v == "paper-literal")
        cfg.gamma_sign = GammaSign::literal_minus;
      else
        fail(line, "unknown gamma_sign '" + v + "' (flux-split | paper-literal)");
    } else {
      fail(line, "unknown key '" + k + "' in [solver]");
    }
  };

  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    const std::size_t hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "malformed section header '" + s + "'");
      section = s.substr(1, s.size() - 2);
      if (section != "geometry" && section != "cell" && section != "macro" &&
          section != "micro" && section != "coefficients" && section != "solver" &&
          section != "output")
        fail(line, "unknown section [" + section + "]");
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value, got '" + s + "'");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key.empty() || val.empty()) fail(line, "empty key or value");
    if (section.empty()) fail(line, "key '" + key + "' outside any section");

    if (section == "geometry") {
      geometry_key(key, val);
    } else if (section == "cell") {
      if (key == "n")
        cfg.n_cell = parse_int(val, line);
      else
        fail(line, "unknown key '" + key + "' in [cell]");
    } else if (section == "macro") {
      if (key == "n")
        cfg.n_macro = parse_int(val, line);
      else
        fail(line, "unknown key '" + key + "' in [macro]");
    } else if (section == "micro") {
      if (key == "n") {
        cfg.n_micro = parse_int(val, line);
      } else if (key == "eps_list") {
        cfg.eps_list.clear();
        std::stringstream list(val);
        std::string item;
        while (std::getline(list, item, ',')) {
          item = trim(item);
          if (item.empty()) fail(line, "empty entry in eps_list");
          cfg.eps_list.push_back(parse_eps(item, line));
        }
        if (cfg.eps_list.empty()) fail(line, "eps_list is empty");
      } else if (key == "epsilon") {
        cfg.eps_list = {parse_eps(val, line)};
      } else if (key == "size_cap") {
        cfg.size_cap = parse_int(val, line);
      } else {
        fail(line, "unknown key '" + key + "' in [micro]");
      }
    } else if (section == "coefficients") {
      coeff_key(key, val);
    } else if (section == "solver") {
      solver_key(key, val);
    } else if (section == "output") {
      if (key == "dir")
        cfg.out_dir = val;
      else
        fail(line, "unknown key '" + key + "' in [output]");
    }
  }

  // Resolution / constraint checks with friendly messages.
  try {
    cfg.geom.validate();
  } catch (const Error& e) {
    throw Error(Errc::config_error, std::string("config: ") + e.what());
  }
  if (cfg.n_cell < 4 || cfg.n_cell > 512)
    throw Error(Errc::config_error, "config: cell resolution must lie in [4, 512]");
  if (cfg.n_macro < 4 || cfg.n_macro > 512)
    throw Error(Errc::config_error, "config: macro resolution must lie in [4, 512]");
  if (cfg.n_micro < 2 || cfg.n_micro > 128)
    throw Error(Errc::config_error, "config: micro per-cell resolution must lie in [2, 128]");
  if (cfg.geom.kind == CellKind::laminate) {
    const double tn = cfg.geom.theta * cfg.n_cell;
    if (std::fabs(tn - std::lround(tn)) > 1e-9)
      throw Error(Errc::config_error,
                  "config: laminate theta * cell resolution must be an integer");
  }
  if (!(cfg.solver.tol > 0.0 && cfg.solver.tol <= 1e-2))
    throw Error(Errc::config_error, "config: solver tol must lie in (0, 1e-2]");
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string resolved_config_text(const RunConfig& cfg) {
  std::ostringstream out;
  char buf[200];
  out << "# resolved configuration (re-parseable)\n[geometry]\n";
  if (cfg.geom.kind == CellKind::laminate) {
    out << "kind = laminate\n";
    std::snprintf(buf, sizeof buf, "theta = %.17g\n", cfg.geom.theta);
    out << buf;
  } else {
    out << "kind = disk\n";
    std::snprintf(buf, sizeof buf, "radius = %.17g\nn_seg = %d\n", cfg.geom.radius,
                  cfg.geom.n_seg);
    out << buf;
  }
  out << "\n[cell]\nn = " << cfg.n_cell << "\n";
  out << "\n[macro]\nn = " << cfg.n_macro << "\n";
  out << "\n[micro]\nn = " << cfg.n_micro << "\neps_list = ";
  for (std::size_t i = 0; i < cfg.eps_list.size(); ++i) {
    if (i) out << ", ";
    out << "1/" << static_cast<long>(std::lround(1.0 / cfg.eps_list[i]));
  }
  out << "\nsize_cap = " << cfg.size_cap << "\n";
  out << "\n[coefficients]\n";
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out << "A1_" << i + 1 << j + 1 << " = " << cfg.coeffs.A1[i][j].str() << "\n";
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out << "A2_" << i + 1 << j + 1 << " = " << cfg.coeffs.A2[i][j].str() << "\n";
  out << "a1 = " << cfg.coeffs.a1.str() << "\n";
  out << "a2 = " << cfg.coeffs.a2.str() << "\n";
  out << "alpha = " << cfg.coeffs.alpha.str() << "\n";
  out << "f1 = " << cfg.coeffs.f1.str() << "\n";
  out << "f2 = " << cfg.coeffs.f2.str() << "\n";
  out << "\n[solver]\n";
  std::snprintf(buf, sizeof buf,
                "tol = %.17g\nmax_iter = %d\ndirect_dim_cap = %d\ncompat_tol = %.17g\n",
                cfg.solver.tol, cfg.solver.max_iter, cfg.solver.direct_dim_cap,
                cfg.compat_tol);
  out << buf;
  out << "validation_grid = " << cfg.validation_grid << "\n";
  out << "alpha_quad_n = " << cfg.alpha_quad_n << "\n";
  out << "sign_convention = " << sign_convention_name(cfg.convention) << "\n";
  out << "gamma_sign = "
      << (cfg.gamma_sign == GammaSign::flux_split ? "flux-split" : "paper-literal")
      << "\n";
  out << "\n[output]\ndir = " << cfg.out_dir << "\n";
  return out.str();
}

}  // namespace bhom
