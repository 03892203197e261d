#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "bhom/geometry.hpp"

namespace bhom {

/// A pair of geometrically coincident edges carrying the two-valued interface
/// trace: (a1,b1) are phase-1 vertex ids, (a2,b2) their phase-2 twins
/// (a1 <-> a2, b1 <-> b2). `normal` points from the phase-1 side into the
/// phase-2 side. On the unit cell the laminate's wrapped component stores the
/// phase-1 side at y2 = 0 and the phase-2 side at y2 = 1; twin coordinates
/// there coincide modulo the unit lattice and `wrap` records the offset.
struct InterfaceEdge {
  int a1, b1;
  int a2, b2;
  Vec2 normal;
  double length;
  std::array<int, 2> wrap{0, 0};  // phase-2 side position = phase-1 side + wrap
  int component = 0;
};

/// One quadrature point of the composite 2-point Gauss rule on the interface.
struct InterfaceQP {
  Vec2 point;      // canonical evaluation point (phase-1 side; wrapped coords)
  double weight;
  Vec2 normal;
  int edge;        // index into Mesh::iface
  double s;        // parameter along the edge in [0,1], for trace shape values
};

enum class MeshKind { unit_cell, micro, square };

/// Nodal values over Mesh::verts.
using Field = std::vector<double>;

/// P1 triangulation with per-phase duplicated interface vertices.
///
/// Every vertex belongs to exactly one phase; interface twins are distinct
/// vertices at (lattice-)coincident positions. Unit-cell meshes carry
/// master/slave periodic pairs on the outer boundary (per phase); micro
/// meshes instead carry per-phase Dirichlet vertex sets. Construction is
/// single-threaded and the result is immutable, safe to share across threads.
struct Mesh {
  MeshKind kind = MeshKind::unit_cell;
  GeometrySpec geom;
  int grid_n = 0;        // structured resolution per unit cell (or per square)
  int tiles = 1;         // micro: K with epsilon = 1/K
  double epsilon = 0.0;  // > 0 only for micro meshes

  std::vector<Vec2> verts;
  std::vector<std::int8_t> vphase;              // 1 or 2
  std::vector<std::array<int, 3>> tris;         // positively oriented
  std::vector<std::int8_t> tphase;
  std::vector<InterfaceEdge> iface;
  std::vector<std::pair<int, int>> periodic;    // (master, slave), same phase
  std::vector<int> dirichlet1, dirichlet2;      // micro/square meshes
  std::array<double, 2> phase_area{0.0, 0.0};

  /// Integer position on the (2 * grid_n * tiles) lattice for structured
  /// vertices ({no_key, no_key} for off-lattice disk interior vertices);
  /// tiling merges on these keys so shared tile boundaries are exact.
  static constexpr int no_key = std::numeric_limits<int>::min();
  std::vector<std::array<int, 2>> lattice_key;

  double geom_deficit = 0.0;  // polygonal-circle area deficit (disk), else 0

  int n_verts() const { return static_cast<int>(verts.size()); }
  int n_tris() const { return static_cast<int>(tris.size()); }

  double tri_area(int t) const;
  /// Constant P1 basis gradients of triangle t (one per vertex).
  std::array<Vec2, 3> tri_grads(int t) const;

  /// Vertex ids of one phase, in ascending order.
  std::vector<int> phase_verts(int phase) const;

  /// Total interface length (sum of edge lengths).
  double interface_measure() const;

  /// Map a physical point to cell coordinates: identity for unit cells,
  /// wrap(x / epsilon) with half-open wrap into [0,1) for micro meshes.
  Vec2 to_cell_coords(Vec2 x) const;
};

/// Structured crossed-triangle unit cell mesh at resolution N.
/// laminate: requires theta*N integral; disk: requires N even, n_seg a
/// multiple of 8, n_seg <= 4N, and the polygon to fit inside the stitching
/// contour. Throws Errc::geometry_error on violations.
Mesh build_unit_cell_mesh(const GeometrySpec& g, int N);

/// K x K tiling (epsilon = 1/K) of the unit cell over Omega = (0,1)^2.
/// Shared tile boundaries merge per phase; interface duplication is
/// preserved; interface pieces falling on the outer boundary become
/// Dirichlet boundary instead. Requires K*N <= size_cap.
Mesh build_micro_mesh(const GeometrySpec& g, int N, double epsilon, int size_cap = 512);

/// Single-phase crossed-triangle mesh of the unit square (macro mesh);
/// all boundary vertices are listed in dirichlet1.
Mesh build_square_mesh(int N);

/// Composite 2-point Gauss rule over all interface edges. Weights sum to the
/// interface measure.
std::vector<InterfaceQP> interface_quadrature(const Mesh& mesh);

/// P1 trace values of an edge's endpoints at parameter s.
inline std::array<double, 2> edge_shape(double s) { return {1.0 - s, s}; }

/// Plain-text dump: sections "vertices", "triangles", "interface",
/// "periodic", each with a count header line.
void dump_mesh(const Mesh& mesh, const std::string& path);

/// Point location + P1 evaluation on one phase of a mesh (bucket-accelerated;
/// the lowest-index containing triangle wins ties deterministically).
class P1Locator {
 public:
  P1Locator(const Mesh& mesh, int phase);

  /// Containing triangle id, or -1.
  int find(Vec2 p) const;
  /// Nodal-field value at p. Unit-cell locators retry p with 0-coordinates
  /// unwrapped to 1 so torus points on the wrapped seam resolve. Throws
  /// Errc::internal_error if the point cannot be located.
  double eval(const std::vector<double>& f, Vec2 p) const;

  int locate_or_throw(Vec2 p) const;
  /// Like locate_or_throw but also reports the (possibly unwrapped) point.
  int locate_adjusted(Vec2 p, Vec2& used) const;

 private:
  const Mesh& mesh_;
  int phase_;
  int nb_ = 0;
  std::vector<std::vector<int>> buckets_;
};

/// Analytic locator for structured square meshes (macro grid): constant-time
/// location, lowest-index tie-breaking on the crossing diagonals.
class SquareLocator {
 public:
  explicit SquareLocator(const Mesh& mesh);

  int find(Vec2 p) const;
  double eval(const std::vector<double>& f, Vec2 p) const;
  Vec2 grad(const std::vector<double>& f, Vec2 p) const;

 private:
  const Mesh& mesh_;
  int n_;
};

}  // namespace bhom
