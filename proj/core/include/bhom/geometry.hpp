#pragma once

#include <array>
#include <cmath>
#include <string>

namespace bhom {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x, double y) : x(x), y(y) {}

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::sqrt(x * x + y * y); }
};

struct Mat2 {
  // row-major
  std::array<std::array<double, 2>, 2> a{{{0.0, 0.0}, {0.0, 0.0}}};

  Mat2() = default;
  Mat2(double a11, double a12, double a21, double a22) : a{{{a11, a12}, {a21, a22}}} {}

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

  double& operator()(int i, int j) { return a[i][j]; }
  double operator()(int i, int j) const { return a[i][j]; }

  Vec2 apply(Vec2 v) const {
    return {a[0][0] * v.x + a[0][1] * v.y, a[1][0] * v.x + a[1][1] * v.y};
  }
  Mat2 transpose() const { return {a[0][0], a[1][0], a[0][1], a[1][1]}; }
};

/// Smallest eigenvalue of the symmetric part of A.
double min_eig_sym(const Mat2& A);
/// Largest eigenvalue of the symmetric part of A.
double max_eig_sym(const Mat2& A);
/// Largest singular value of A.
double max_singular(const Mat2& A);

enum class CellKind { laminate, disk };

/// Unit-cell microstructure description.
///
/// laminate: phase 1 occupies the stripe 0 < y2 < theta, phase 2 the rest;
///   the interface has two components, y2 = theta and the wrapped line
///   y2 = 0 (== 1 under cell periodicity).
/// disk: phase 2 is a polygonal disk of the given radius centered at
///   (0.5, 0.5) with n_seg boundary segments; phase 1 is the complement.
struct GeometrySpec {
  CellKind kind = CellKind::laminate;
  double theta = 0.5;   // laminate volume fraction of phase 1, in (0,1)
  double radius = 0.25; // disk radius, in [0.05, 0.45]
  int n_seg = 64;       // disk boundary segments, multiple of 8

  /// Exact phase predicate (analytic circle for the disk, not the polygon).
  int phase_of(Vec2 y) const;

  /// Throws Errc::geometry_error on out-of-range parameters.
  void validate() const;

  /// Canonical printable form, also used for provenance hashes.
  std::string tag() const;
};

/// FNV-1a hash of the canonical geometry tag plus the cell resolution.
std::string geometry_hash(const GeometrySpec& g, int n_cell);

}  // namespace bhom
