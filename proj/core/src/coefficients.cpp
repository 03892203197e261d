#include "bhom/coefficients.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "bhom/errors.hpp"

namespace bhom {

namespace {

constexpr double kPi = 3.14159265358979323846;

Mat2 eval_matrix(const Matrix2Expr& A, Vec2 y) {
  Mat2 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = A[i][j].eval(y);
  return m;
}

// Interface parametrization used by the diagnostics: a list of straight
// segments per component (laminate lines, disk polygon edges).
struct Segment {
  Vec2 a, b;
  int component;
};

std::vector<Segment> interface_segments(const GeometrySpec& g) {
  std::vector<Segment> segs;
  if (g.kind == CellKind::laminate) {
    segs.push_back({{0.0, g.theta}, {1.0, g.theta}, 0});
    segs.push_back({{0.0, 0.0}, {1.0, 0.0}, 1});  // wrapped component at y2 = 0
  } else {
    for (int t = 0; t < g.n_seg; ++t) {
      const double a0 = 2.0 * kPi * t / g.n_seg;
      const double a1 = 2.0 * kPi * (t + 1) / g.n_seg;
      segs.push_back({{0.5 + g.radius * std::cos(a0), 0.5 + g.radius * std::sin(a0)},
                      {0.5 + g.radius * std::cos(a1), 0.5 + g.radius * std::sin(a1)},
                      0});
    }
  }
  return segs;
}

}  // namespace

CoefficientSet CoefficientSet::defaults() {
  CoefficientSet c;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const char* e = (i == j) ? "1" : "0";
      c.A1[i][j] = parse_expression(e, SymbolDomain::cell);
      c.A2[i][j] = parse_expression(e, SymbolDomain::cell);
    }
  c.a1 = parse_expression("1", SymbolDomain::cell);
  c.a2 = parse_expression("1", SymbolDomain::cell);
  c.alpha = parse_expression("cos(2*pi*y1)", SymbolDomain::cell);
  c.f1 = parse_expression("1", SymbolDomain::macro);
  c.f2 = parse_expression("sin(pi*x1)", SymbolDomain::macro);
  return c;
}

Mat2 CoefficientSet::eval_A(int phase, Vec2 y) const {
  return eval_matrix(phase == 1 ? A1 : A2, y);
}

double CoefficientSet::eval_a(int phase, Vec2 y) const {
  return (phase == 1 ? a1 : a2).eval(y);
}

ValidationReport validate_coefficients(const CoefficientSet& c, const GeometrySpec& g,
                                       int grid_n) {
  if (grid_n < 8) throw Error(Errc::config_error, "validation grid must be >= 8");
  ValidationReport rep;
  double m[2] = {std::numeric_limits<double>::infinity(),
                 std::numeric_limits<double>::infinity()};
  double M[2] = {0.0, 0.0};
  double eta[2] = {std::numeric_limits<double>::infinity(),
                   std::numeric_limits<double>::infinity()};

  // Cell-centered samples avoid phase-boundary ties.
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      const Vec2 y{(i + 0.5) / grid_n, (j + 0.5) / grid_n};
      const int ph = g.phase_of(y);
      const Mat2 A = c.eval_A(ph, y);
      m[ph - 1] = std::min(m[ph - 1], min_eig_sym(A));
      M[ph - 1] = std::max(M[ph - 1], max_singular(A));
      eta[ph - 1] = std::min(eta[ph - 1], c.eval_a(ph, y));
    }
  }

  char buf[160];
  for (int ph = 1; ph <= 2; ++ph) {
    if (!(m[ph - 1] > 0.0)) {
      std::snprintf(buf, sizeof buf,
                    "conductivity tensor of phase %d is not uniformly elliptic "
                    "(sampled min eigenvalue of the symmetric part = %.3g)",
                    ph, m[ph - 1]);
      throw Error(Errc::ellipticity_violation, buf);
    }
    if (!(eta[ph - 1] > 0.0)) {
      std::snprintf(buf, sizeof buf,
                    "reaction coefficient of phase %d is not positive "
                    "(sampled min = %.3g)",
                    ph, eta[ph - 1]);
      throw Error(Errc::positivity_violation, buf);
    }
  }

  // Numeric periodicity check: values on opposite cell edges should agree.
  // Violations are warnings, not errors.
  auto check_periodic = [&](const Expression& e, const char* name) {
    double worst = 0.0;
    const int s = 33;
    for (int k = 0; k <= s; ++k) {
      const double t = static_cast<double>(k) / s;
      worst = std::max(worst, std::fabs(e.eval({0.0, t}) - e.eval({1.0, t})));
      worst = std::max(worst, std::fabs(e.eval({t, 0.0}) - e.eval({t, 1.0})));
    }
    if (worst > 1e-10) {
      std::snprintf(buf, sizeof buf,
                    "%s is not numerically cell-periodic (edge mismatch %.3g)", name,
                    worst);
      rep.warnings.emplace_back(buf);
    }
  };
  const char* names1[2][2] = {{"A1[1][1]", "A1[1][2]"}, {"A1[2][1]", "A1[2][2]"}};
  const char* names2[2][2] = {{"A2[1][1]", "A2[1][2]"}, {"A2[2][1]", "A2[2][2]"}};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      check_periodic(c.A1[i][j], names1[i][j]);
      check_periodic(c.A2[i][j], names2[i][j]);
    }
  check_periodic(c.a1, "a1");
  check_periodic(c.a2, "a2");
  check_periodic(c.alpha, "alpha");

  rep.m1 = m[0];
  rep.M1 = M[0];
  rep.m2 = m[1];
  rep.M2 = M[1];
  rep.eta1 = eta[0];
  rep.eta2 = eta[1];
  return rep;
}

AlphaDiagnostics alpha_diagnostics(const Expression& alpha, const GeometrySpec& g,
                                   int quad_n) {
  if (quad_n < 16)
    throw Error(Errc::config_error, "alpha diagnostics need >= 16 panels per component");
  AlphaDiagnostics d;
  double integral = 0.0, measure = 0.0;
  double plus_min = std::numeric_limits<double>::infinity();
  double minus_sup = 0.0;
  bool has_plus = false;

  const auto segs = interface_segments(g);
  int n_components = 0;
  for (const auto& s : segs) n_components = std::max(n_components, s.component + 1);
  // quad_n panels per component, spread uniformly over its segments.
  std::vector<int> seg_count(n_components, 0);
  for (const auto& s : segs) ++seg_count[s.component];

  const double gp = 0.5 / std::sqrt(3.0);
  for (const auto& s : segs) {
    const int panels = (quad_n + seg_count[s.component] - 1) / seg_count[s.component];
    const Vec2 dir = s.b - s.a;
    const double len = dir.norm();
    for (int p = 0; p < panels; ++p) {
      const double lo = static_cast<double>(p) / panels;
      const double w = 0.5 * len / panels;
      for (const double off : {0.5 - gp, 0.5 + gp}) {
        const double t = lo + off / panels;
        const double v = alpha.eval(s.a + dir * t);
        integral += w * v;
        if (v > 0.0) {
          has_plus = true;
          plus_min = std::min(plus_min, v);
        }
        minus_sup = std::max(minus_sup, -v);
      }
    }
    measure += len;
  }
  d.sigma_measure = measure;
  d.mean_on_sigma = integral / measure;
  d.alpha_plus_min_on_support = has_plus ? plus_min : 0.0;
  d.alpha_minus_sup = std::max(minus_sup, 0.0);
  return d;
}

}  // namespace bhom
