#include "bhom/geometry.hpp"

#include <cstdint>
#include <cstdio>

#include "bhom/errors.hpp"

namespace bhom {

namespace {

// Eigenvalues of a symmetric 2x2 [[p,q],[q,s]].
void sym_eigs(double p, double q, double s, double& lo, double& hi) {
  const double half_tr = 0.5 * (p + s);
  const double disc = std::sqrt(0.25 * (p - s) * (p - s) + q * q);
  lo = half_tr - disc;
  hi = half_tr + disc;
}

}  // namespace

double min_eig_sym(const Mat2& A) {
  double lo, hi;
  const double q = 0.5 * (A(0, 1) + A(1, 0));
  sym_eigs(A(0, 0), q, A(1, 1), lo, hi);
  return lo;
}

double max_eig_sym(const Mat2& A) {
  double lo, hi;
  const double q = 0.5 * (A(0, 1) + A(1, 0));
  sym_eigs(A(0, 0), q, A(1, 1), lo, hi);
  return hi;
}

double max_singular(const Mat2& A) {
  // sqrt of the largest eigenvalue of A^T A (symmetric PSD).
  const double p = A(0, 0) * A(0, 0) + A(1, 0) * A(1, 0);
  const double s = A(0, 1) * A(0, 1) + A(1, 1) * A(1, 1);
  const double q = A(0, 0) * A(0, 1) + A(1, 0) * A(1, 1);
  double lo, hi;
  sym_eigs(p, q, s, lo, hi);
  return std::sqrt(std::max(hi, 0.0));
}

int GeometrySpec::phase_of(Vec2 y) const {
  if (kind == CellKind::laminate) {
    return y.y < theta ? 1 : 2;
  }
  const double dx = y.x - 0.5, dy = y.y - 0.5;
  return dx * dx + dy * dy < radius * radius ? 2 : 1;
}

void GeometrySpec::validate() const {
  if (kind == CellKind::laminate) {
    if (!(theta > 0.0 && theta < 1.0))
      throw Error(Errc::geometry_error, "laminate theta must lie in (0,1)");
  } else {
    if (!(radius >= 0.05 && radius <= 0.45))
      throw Error(Errc::geometry_error, "disk radius must lie in [0.05, 0.45]");
    if (n_seg < 8 || n_seg % 8 != 0)
      throw Error(Errc::geometry_error, "disk n_seg must be a positive multiple of 8");
  }
}

std::string GeometrySpec::tag() const {
  char buf[128];
  if (kind == CellKind::laminate) {
    std::snprintf(buf, sizeof buf, "laminate theta=%.17g", theta);
  } else {
    std::snprintf(buf, sizeof buf, "disk radius=%.17g n_seg=%d", radius, n_seg);
  }
  return buf;
}

std::string geometry_hash(const GeometrySpec& g, int n_cell) {
  std::string s = g.tag();
  s += " N=" + std::to_string(n_cell);
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace bhom
