#include "bhom/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <unordered_map>

#include "bhom/errors.hpp"

namespace bhom {

namespace {

constexpr double kPi = 3.14159265358979323846;

int add_vert(Mesh& m, Vec2 p, int phase, std::array<int, 2> key) {
  m.verts.push_back(p);
  m.vphase.push_back(static_cast<std::int8_t>(phase));
  m.lattice_key.push_back(key);
  return m.n_verts() - 1;
}

void add_tri(Mesh& m, int a, int b, int c, int phase) {
  m.tris.push_back({a, b, c});
  m.tphase.push_back(static_cast<std::int8_t>(phase));
}

double signed_area(const Mesh& m, int a, int b, int c) {
  return 0.5 * (m.verts[b] - m.verts[a]).cross(m.verts[c] - m.verts[a]);
}

// Crossed-triangle pattern for one grid square: 4 triangles around the center.
void add_cross_square(Mesh& m, int bl, int br, int tr, int tl, int ct, int phase) {
  add_tri(m, bl, br, ct, phase);
  add_tri(m, br, tr, ct, phase);
  add_tri(m, tr, tl, ct, phase);
  add_tri(m, tl, bl, ct, phase);
}

void finish_areas(Mesh& m) {
  m.phase_area = {0.0, 0.0};
  for (int t = 0; t < m.n_tris(); ++t) {
    const double a = m.tri_area(t);
    if (a < 1e-14)
      throw Error(Errc::geometry_error,
                  "degenerate triangle " + std::to_string(t) + " (area " +
                      std::to_string(a) + ")");
    m.phase_area[m.tphase[t] - 1] += a;
  }
}

Mesh build_laminate_cell(const GeometrySpec& g, int N) {
  const double tN = g.theta * N;
  const int M = static_cast<int>(std::lround(tN));
  if (std::fabs(tN - M) > 1e-9 || M < 1 || M > N - 1)
    throw Error(Errc::geometry_error,
                "laminate requires theta*N integral with 1 <= theta*N <= N-1 "
                "(theta*N = " + std::to_string(tN) + ")");

  Mesh m;
  m.kind = MeshKind::unit_cell;
  m.geom = g;
  m.grid_n = N;

  const double h = 1.0 / N;
  // Vertex layout per phase: grid rows first, then square centers.
  std::vector<int> g1((N + 1) * (M + 1)), g2((N + 1) * (N - M + 1));
  std::vector<int> c1(N * M), c2(N * (N - M));
  for (int j = 0; j <= M; ++j)
    for (int i = 0; i <= N; ++i)
      g1[j * (N + 1) + i] = add_vert(m, {i * h, j * h}, 1, {2 * i, 2 * j});
  for (int j = 0; j < M; ++j)
    for (int i = 0; i < N; ++i)
      c1[j * N + i] =
          add_vert(m, {(i + 0.5) * h, (j + 0.5) * h}, 1, {2 * i + 1, 2 * j + 1});
  for (int j = M; j <= N; ++j)
    for (int i = 0; i <= N; ++i)
      g2[(j - M) * (N + 1) + i] = add_vert(m, {i * h, j * h}, 2, {2 * i, 2 * j});
  for (int j = M; j < N; ++j)
    for (int i = 0; i < N; ++i)
      c2[(j - M) * N + i] =
          add_vert(m, {(i + 0.5) * h, (j + 0.5) * h}, 2, {2 * i + 1, 2 * j + 1});

  auto G1 = [&](int i, int j) { return g1[j * (N + 1) + i]; };
  auto G2 = [&](int i, int j) { return g2[(j - M) * (N + 1) + i]; };

  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) {
      if (j < M)
        add_cross_square(m, G1(i, j), G1(i + 1, j), G1(i + 1, j + 1), G1(i, j + 1),
                         c1[j * N + i], 1);
      else
        add_cross_square(m, G2(i, j), G2(i + 1, j), G2(i + 1, j + 1), G2(i, j + 1),
                         c2[(j - M) * N + i], 2);
    }

  // Interface component 0: y2 = theta. Component 1: the wrapped line, phase-1
  // side at y2 = 0, phase-2 side at y2 = 1 (coincident modulo the lattice).
  for (int i = 0; i < N; ++i) {
    m.iface.push_back({G1(i, M), G1(i + 1, M), G2(i, M), G2(i + 1, M),
                       {0.0, 1.0}, h, {0, 0}, 0});
  }
  for (int i = 0; i < N; ++i) {
    m.iface.push_back({G1(i, 0), G1(i + 1, 0), G2(i, N), G2(i + 1, N),
                       {0.0, -1.0}, h, {0, 1}, 1});
  }

  // Left-right periodic pairing per phase (stripes do not wrap vertically).
  for (int j = 0; j <= M; ++j) m.periodic.emplace_back(G1(0, j), G1(N, j));
  for (int j = M; j <= N; ++j) m.periodic.emplace_back(G2(0, j), G2(N, j));

  finish_areas(m);
  return m;
}

Mesh build_disk_cell(const GeometrySpec& g, int N) {
  if (N % 2 != 0)
    throw Error(Errc::geometry_error, "disk geometry requires an even cell resolution");
  if (g.n_seg > 4 * N)
    throw Error(Errc::geometry_error, "disk requires n_seg <= 4*N");
  // Stitching contour: grid-aligned square of half-width k/N strictly
  // containing the circle with at least one grid cell of clearance.
  const int k = static_cast<int>(std::ceil(g.radius * N + 1.0 - 1e-12));
  if (k > N / 2)
    throw Error(Errc::geometry_error,
                "disk radius too large for this resolution (no room for the "
                "stitching contour); increase N");
  const int lo = N / 2 - k, hi = N / 2 + k;

  Mesh m;
  m.kind = MeshKind::unit_cell;
  m.geom = g;
  m.grid_n = N;
  const double h = 1.0 / N;
  const int n_seg = g.n_seg;

  // --- phase 1: outer grid (everything outside the contour square) ---
  std::vector<int> gid((N + 1) * (N + 1), -1);
  auto keep_vert = [&](int i, int j) { return !(i > lo && i < hi && j > lo && j < hi); };
  for (int j = 0; j <= N; ++j)
    for (int i = 0; i <= N; ++i)
      if (keep_vert(i, j))
        gid[j * (N + 1) + i] = add_vert(m, {i * h, j * h}, 1, {2 * i, 2 * j});
  auto G = [&](int i, int j) { return gid[j * (N + 1) + i]; };

  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) {
      const bool outside = (i + 1 <= lo) || (i >= hi) || (j + 1 <= lo) || (j >= hi);
      if (!outside) continue;
      const int ct = add_vert(m, {(i + 0.5) * h, (j + 0.5) * h}, 1, {2 * i + 1, 2 * j + 1});
      add_cross_square(m, G(i, j), G(i + 1, j), G(i + 1, j + 1), G(i, j + 1), ct, 1);
    }

  // Contour loop, counterclockwise. Degenerates to the cell boundary if
  // k == N/2.
  std::vector<int> contour;
  for (int j = lo; j < hi; ++j) contour.push_back(G(hi, j));
  for (int i = hi; i > lo; --i) contour.push_back(G(i, hi));
  for (int j = hi; j > lo; --j) contour.push_back(G(lo, j));
  for (int i = lo; i < hi; ++i) contour.push_back(G(i, lo));

  // Circle polygon, phase-1 copies (off-lattice).
  std::vector<int> circ1(n_seg);
  for (int t = 0; t < n_seg; ++t) {
    const double a = 2.0 * kPi * t / n_seg;
    circ1[t] = add_vert(m, {0.5 + g.radius * std::cos(a), 0.5 + g.radius * std::sin(a)},
                        1, {Mesh::no_key, Mesh::no_key});
  }

  // Stitch the annulus between the contour and the circle by an angular
  // sweep; both loops are star-shaped about the center and strictly nested.
  {
    const Vec2 c{0.5, 0.5};
    auto angle = [&](int v) { return std::atan2(m.verts[v].y - c.y, m.verts[v].x - c.x); };
    const int nc = static_cast<int>(contour.size());
    int start = 0;
    for (int i = 1; i < nc; ++i)
      if (angle(contour[i]) < angle(contour[start])) start = i;
    std::rotate(contour.begin(), contour.begin() + start, contour.end());
    std::vector<double> ac(nc + 1);
    ac[0] = angle(contour[0]);
    for (int i = 1; i < nc; ++i) {
      ac[i] = angle(contour[i]);
      while (ac[i] < ac[i - 1]) ac[i] += 2.0 * kPi;
    }
    ac[nc] = ac[0] + 2.0 * kPi;

    std::vector<int> circ = circ1;
    int pstart = 0;
    auto adj = [&](int v) {
      double a = angle(v);
      while (a < ac[0]) a += 2.0 * kPi;
      return a;
    };
    for (int t = 1; t < n_seg; ++t)
      if (adj(circ[t]) < adj(circ[pstart])) pstart = t;
    std::rotate(circ.begin(), circ.begin() + pstart, circ.end());
    std::vector<double> ap(n_seg + 1);
    ap[0] = adj(circ[0]);
    for (int t = 1; t < n_seg; ++t) {
      ap[t] = adj(circ[t]);
      while (ap[t] < ap[t - 1]) ap[t] += 2.0 * kPi;
    }
    ap[n_seg] = ap[0] + 2.0 * kPi;

    auto emit = [&](int a, int b, int cc) {
      if (signed_area(m, a, b, cc) < 0.0) std::swap(b, cc);
      add_tri(m, a, b, cc, 1);
    };
    int i = 0, j = 0;
    while (i < nc || j < n_seg) {
      if (j >= n_seg || (i < nc && ac[i + 1] <= ap[j + 1])) {
        emit(contour[i % nc], contour[(i + 1) % nc], circ[j % n_seg]);
        ++i;
      } else {
        emit(circ[j % n_seg], circ[(j + 1) % n_seg], contour[i % nc]);
        ++j;
      }
    }
  }

  // --- phase 2: center fan + concentric rings, outermost ring on the circle ---
  const int rings = std::max(2, static_cast<int>(std::lround(g.radius * N)));
  const int center = add_vert(m, {0.5, 0.5}, 2, {Mesh::no_key, Mesh::no_key});
  std::vector<std::vector<int>> ring(rings);
  for (int jr = 1; jr <= rings; ++jr) {
    ring[jr - 1].resize(n_seg);
    const double rho = g.radius * jr / rings;
    for (int t = 0; t < n_seg; ++t) {
      const double a = 2.0 * kPi * t / n_seg;
      ring[jr - 1][t] = add_vert(m, {0.5 + rho * std::cos(a), 0.5 + rho * std::sin(a)},
                                 2, {Mesh::no_key, Mesh::no_key});
    }
  }
  for (int t = 0; t < n_seg; ++t)
    add_tri(m, center, ring[0][t], ring[0][(t + 1) % n_seg], 2);
  for (int jr = 0; jr + 1 < rings; ++jr)
    for (int t = 0; t < n_seg; ++t) {
      const int t1 = (t + 1) % n_seg;
      add_tri(m, ring[jr][t], ring[jr + 1][t], ring[jr + 1][t1], 2);
      add_tri(m, ring[jr][t], ring[jr + 1][t1], ring[jr][t1], 2);
    }

  const std::vector<int>& circ2 = ring[rings - 1];
  for (int t = 0; t < n_seg; ++t) {
    const int t1 = (t + 1) % n_seg;
    const Vec2 dir = m.verts[circ1[t1]] - m.verts[circ1[t]];
    const double len = dir.norm();
    m.iface.push_back({circ1[t], circ1[t1], circ2[t], circ2[t1],
                       {-dir.y / len, dir.x / len}, len, {0, 0}, 0});
  }

  // Periodic pairing on the outer boundary (phase 1 only); corners map to
  // the canonical master at (0,0).
  for (int j = 0; j <= N; ++j)
    for (int i = 0; i <= N; ++i) {
      if (G(i, j) < 0) continue;
      if (i < N && j < N) continue;
      const int mi = i % N, mj = j % N;
      if (mi == i && mj == j) continue;
      m.periodic.emplace_back(G(mi, mj), G(i, j));
    }

  const double poly_area = 0.5 * n_seg * g.radius * g.radius * std::sin(2.0 * kPi / n_seg);
  m.geom_deficit = 1.0 - poly_area / (kPi * g.radius * g.radius);

  finish_areas(m);
  return m;
}

}  // namespace

double Mesh::tri_area(int t) const {
  const auto& tr = tris[t];
  return 0.5 * (verts[tr[1]] - verts[tr[0]]).cross(verts[tr[2]] - verts[tr[0]]);
}

std::array<Vec2, 3> Mesh::tri_grads(int t) const {
  const auto& tr = tris[t];
  const double inv2A = 1.0 / (2.0 * tri_area(t));
  std::array<Vec2, 3> g;
  for (int i = 0; i < 3; ++i) {
    const Vec2 e = verts[tr[(i + 2) % 3]] - verts[tr[(i + 1) % 3]];
    g[i] = Vec2{-e.y, e.x} * inv2A;
  }
  return g;
}

std::vector<int> Mesh::phase_verts(int phase) const {
  std::vector<int> out;
  for (int v = 0; v < n_verts(); ++v)
    if (vphase[v] == phase) out.push_back(v);
  return out;
}

double Mesh::interface_measure() const {
  double s = 0.0;
  for (const auto& e : iface) s += e.length;
  return s;
}

Vec2 Mesh::to_cell_coords(Vec2 x) const {
  if (epsilon <= 0.0) return x;
  const double sx = x.x / epsilon, sy = x.y / epsilon;
  return {sx - std::floor(sx), sy - std::floor(sy)};
}

Mesh build_unit_cell_mesh(const GeometrySpec& g, int N) {
  g.validate();
  if (N < 4) throw Error(Errc::geometry_error, "cell resolution must be >= 4");
  return g.kind == CellKind::laminate ? build_laminate_cell(g, N) : build_disk_cell(g, N);
}

Mesh build_micro_mesh(const GeometrySpec& g, int N, double epsilon, int size_cap) {
  if (!(epsilon > 0.0))
    throw Error(Errc::geometry_error, "epsilon must be positive");
  const int K = static_cast<int>(std::lround(1.0 / epsilon));
  if (K < 1 || std::fabs(K * epsilon - 1.0) > 1e-9)
    throw Error(Errc::geometry_error,
                "epsilon must be the reciprocal of an integer (got " +
                    std::to_string(epsilon) + ")");
  if (static_cast<long long>(K) * N > size_cap)
    throw Error(Errc::size_cap_exceeded,
                "micro resolution K*N = " + std::to_string(K * N) +
                    " exceeds the size cap " + std::to_string(size_cap));

  const Mesh cell = build_unit_cell_mesh(g, N);

  Mesh m;
  m.kind = MeshKind::micro;
  m.geom = g;
  m.grid_n = N;
  m.tiles = K;
  m.epsilon = 1.0 / K;
  m.geom_deficit = cell.geom_deficit;

  const int span = 2 * N;  // lattice positions per tile edge
  const int nv_cell = cell.n_verts();
  std::unordered_map<long long, int> merged;  // (phase, key) -> global id
  merged.reserve(static_cast<std::size_t>(nv_cell) * K);
  const long long stride = 2LL * static_cast<long long>(span) * K + 4;

  std::vector<int> vmap(static_cast<std::size_t>(nv_cell) * K * K, -1);
  auto map_at = [&](int tx, int ty) {
    return vmap.data() + static_cast<std::size_t>(ty * K + tx) * nv_cell;
  };

  for (int ty = 0; ty < K; ++ty)
    for (int tx = 0; tx < K; ++tx) {
      int* tm = map_at(tx, ty);
      for (int v = 0; v < nv_cell; ++v) {
        const auto key = cell.lattice_key[v];
        if (key[0] == Mesh::no_key) {
          tm[v] = add_vert(m,
                           {(cell.verts[v].x + tx) / K, (cell.verts[v].y + ty) / K},
                           cell.vphase[v], {Mesh::no_key, Mesh::no_key});
          continue;
        }
        const int gx = key[0] + span * tx;
        const int gy = key[1] + span * ty;
        const long long h =
            (static_cast<long long>(gx) * stride + gy) * 2 + (cell.vphase[v] - 1);
        auto [it, inserted] = merged.try_emplace(h, -1);
        if (inserted) {
          const double denom = static_cast<double>(span) * K;
          it->second = add_vert(m, {gx / denom, gy / denom}, cell.vphase[v], {gx, gy});
        }
        tm[v] = it->second;
      }
    }

  for (int ty = 0; ty < K; ++ty)
    for (int tx = 0; tx < K; ++tx) {
      const int* tm = map_at(tx, ty);
      for (int t = 0; t < cell.n_tris(); ++t)
        add_tri(m, tm[cell.tris[t][0]], tm[cell.tris[t][1]], tm[cell.tris[t][2]],
                cell.tphase[t]);
    }

  // Interface edges: the phase-1 side lives in this tile; the phase-2 side of
  // a wrapped cell component lives in the neighbor tile one wrap-offset down.
  // Pieces whose neighbor tile falls outside the domain lie on the outer
  // boundary and are Dirichlet boundary, not interface.
  for (int ty = 0; ty < K; ++ty)
    for (int tx = 0; tx < K; ++tx) {
      const int* tm = map_at(tx, ty);
      for (const auto& e : cell.iface) {
        const int nx = tx - e.wrap[0], ny = ty - e.wrap[1];
        if (nx < 0 || nx >= K || ny < 0 || ny >= K) continue;
        const int* nm = map_at(nx, ny);
        m.iface.push_back({tm[e.a1], tm[e.b1], nm[e.a2], nm[e.b2], e.normal,
                           e.length / K, {0, 0}, e.component});
      }
    }

  const int edge = span * K;
  for (int v = 0; v < m.n_verts(); ++v) {
    const auto key = m.lattice_key[v];
    if (key[0] == Mesh::no_key) continue;
    if (key[0] == 0 || key[0] == edge || key[1] == 0 || key[1] == edge) {
      (m.vphase[v] == 1 ? m.dirichlet1 : m.dirichlet2).push_back(v);
    }
  }

  finish_areas(m);
  return m;
}

Mesh build_square_mesh(int N) {
  if (N < 2) throw Error(Errc::geometry_error, "square mesh resolution must be >= 2");
  Mesh m;
  m.kind = MeshKind::square;
  m.grid_n = N;
  const double h = 1.0 / N;
  std::vector<int> gid((N + 1) * (N + 1));
  for (int j = 0; j <= N; ++j)
    for (int i = 0; i <= N; ++i)
      gid[j * (N + 1) + i] = add_vert(m, {i * h, j * h}, 1, {2 * i, 2 * j});
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) {
      const int ct = add_vert(m, {(i + 0.5) * h, (j + 0.5) * h}, 1, {2 * i + 1, 2 * j + 1});
      add_cross_square(m, gid[j * (N + 1) + i], gid[j * (N + 1) + i + 1],
                       gid[(j + 1) * (N + 1) + i + 1], gid[(j + 1) * (N + 1) + i], ct, 1);
    }
  for (int j = 0; j <= N; ++j)
    for (int i = 0; i <= N; ++i)
      if (i == 0 || i == N || j == 0 || j == N)
        m.dirichlet1.push_back(gid[j * (N + 1) + i]);
  finish_areas(m);
  return m;
}

std::vector<InterfaceQP> interface_quadrature(const Mesh& mesh) {
  std::vector<InterfaceQP> qps;
  qps.reserve(mesh.iface.size() * 2);
  const double gp = 0.5 / std::sqrt(3.0);
  for (int e = 0; e < static_cast<int>(mesh.iface.size()); ++e) {
    const auto& ie = mesh.iface[e];
    const Vec2 a = mesh.verts[ie.a1];
    const Vec2 dir = mesh.verts[ie.b1] - a;
    for (const double s : {0.5 - gp, 0.5 + gp})
      qps.push_back({a + dir * s, 0.5 * ie.length, ie.normal, e, s});
  }
  return qps;
}

void dump_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write " + path);
  char buf[160];
  out << "vertices " << mesh.n_verts() << "\n";
  for (int v = 0; v < mesh.n_verts(); ++v) {
    std::snprintf(buf, sizeof buf, "%d %.17g %.17g %d\n", v, mesh.verts[v].x,
                  mesh.verts[v].y, static_cast<int>(mesh.vphase[v]));
    out << buf;
  }
  out << "triangles " << mesh.n_tris() << "\n";
  for (int t = 0; t < mesh.n_tris(); ++t)
    out << t << ' ' << mesh.tris[t][0] << ' ' << mesh.tris[t][1] << ' '
        << mesh.tris[t][2] << ' ' << static_cast<int>(mesh.tphase[t]) << "\n";
  out << "interface " << mesh.iface.size() << "\n";
  for (const auto& e : mesh.iface)
    out << e.a1 << ' ' << e.b1 << ' ' << e.a2 << ' ' << e.b2 << "\n";
  out << "periodic " << mesh.periodic.size() << "\n";
  for (const auto& [ma, sl] : mesh.periodic) out << ma << ' ' << sl << "\n";
}

P1Locator::P1Locator(const Mesh& mesh, int phase) : mesh_(mesh), phase_(phase) {
  int count = 0;
  for (int t = 0; t < mesh.n_tris(); ++t)
    if (mesh.tphase[t] == phase) ++count;
  nb_ = std::clamp(static_cast<int>(std::sqrt(static_cast<double>(count))), 4, 256);
  buckets_.assign(static_cast<std::size_t>(nb_) * nb_, {});
  for (int t = 0; t < mesh.n_tris(); ++t) {
    if (mesh.tphase[t] != phase) continue;
    double x0 = 1e30, x1 = -1e30, y0 = 1e30, y1 = -1e30;
    for (int v : mesh.tris[t]) {
      x0 = std::min(x0, mesh.verts[v].x);
      x1 = std::max(x1, mesh.verts[v].x);
      y0 = std::min(y0, mesh.verts[v].y);
      y1 = std::max(y1, mesh.verts[v].y);
    }
    const int bx0 = std::clamp(static_cast<int>(x0 * nb_ - 1e-12), 0, nb_ - 1);
    const int bx1 = std::clamp(static_cast<int>(x1 * nb_ + 1e-12), 0, nb_ - 1);
    const int by0 = std::clamp(static_cast<int>(y0 * nb_ - 1e-12), 0, nb_ - 1);
    const int by1 = std::clamp(static_cast<int>(y1 * nb_ + 1e-12), 0, nb_ - 1);
    for (int by = by0; by <= by1; ++by)
      for (int bx = bx0; bx <= bx1; ++bx)
        buckets_[static_cast<std::size_t>(by) * nb_ + bx].push_back(t);
  }
}

int P1Locator::find(Vec2 p) const {
  const int bx = std::clamp(static_cast<int>(p.x * nb_), 0, nb_ - 1);
  const int by = std::clamp(static_cast<int>(p.y * nb_), 0, nb_ - 1);
  for (int t : buckets_[static_cast<std::size_t>(by) * nb_ + bx]) {
    const auto& tr = mesh_.tris[t];
    const Vec2 a = mesh_.verts[tr[0]], b = mesh_.verts[tr[1]], c = mesh_.verts[tr[2]];
    const double den = (b - a).cross(c - a);
    const double l1 = (p - a).cross(c - a) / den;
    const double l2 = (b - a).cross(p - a) / den;
    if (l1 >= -1e-12 && l2 >= -1e-12 && l1 + l2 <= 1.0 + 1e-12) return t;
  }
  return -1;
}

int P1Locator::locate_or_throw(Vec2 p) const {
  Vec2 q;
  return locate_adjusted(p, q);
}

int P1Locator::locate_adjusted(Vec2 p, Vec2& used) const {
  int t = find(p);
  used = p;
  if (t >= 0) return t;
  if (mesh_.kind == MeshKind::unit_cell) {
    // Torus seam: half-open wrapping puts seam points at coordinate 0, but
    // this phase may only carry the coordinate-1 side (laminate wrapped
    // component). Retry with 0-coordinates unwrapped.
    const bool ux = std::fabs(p.x) < 1e-13, uy = std::fabs(p.y) < 1e-13;
    if (ux && (t = find(used = {p.x + 1.0, p.y})) >= 0) return t;
    if (uy && (t = find(used = {p.x, p.y + 1.0})) >= 0) return t;
    if (ux && uy && (t = find(used = {p.x + 1.0, p.y + 1.0})) >= 0) return t;
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "point (%.17g, %.17g) not found in phase %d mesh", p.x,
                p.y, phase_);
  throw Error(Errc::internal_error, buf);
}

double P1Locator::eval(const std::vector<double>& f, Vec2 p) const {
  Vec2 q;
  const int t = locate_adjusted(p, q);
  const auto& tr = mesh_.tris[t];
  const Vec2 a = mesh_.verts[tr[0]], b = mesh_.verts[tr[1]], c = mesh_.verts[tr[2]];
  const double den = (b - a).cross(c - a);
  const double l1 = (q - a).cross(c - a) / den;
  const double l2 = (b - a).cross(q - a) / den;
  const double l0 = 1.0 - l1 - l2;
  return l0 * f[tr[0]] + l1 * f[tr[1]] + l2 * f[tr[2]];
}

SquareLocator::SquareLocator(const Mesh& mesh) : mesh_(mesh), n_(mesh.grid_n) {
  if (mesh.kind != MeshKind::square)
    throw Error(Errc::internal_error, "SquareLocator requires a square mesh");
}

int SquareLocator::find(Vec2 p) const {
  const int i = std::clamp(static_cast<int>(p.x * n_), 0, n_ - 1);
  const int j = std::clamp(static_cast<int>(p.y * n_), 0, n_ - 1);
  const double u = p.x * n_ - i - 0.5;
  const double v = p.y * n_ - j - 0.5;
  // Squares were emitted row-major with 4 triangles each in S,E,N,W order.
  const int base = 4 * (j * n_ + i);
  if (v <= -std::fabs(u)) return base + 0;
  if (u >= std::fabs(v)) return base + 1;
  if (v >= std::fabs(u)) return base + 2;
  return base + 3;
}

double SquareLocator::eval(const std::vector<double>& f, Vec2 p) const {
  const int t = find(p);
  const auto& tr = mesh_.tris[t];
  const Vec2 a = mesh_.verts[tr[0]], b = mesh_.verts[tr[1]], c = mesh_.verts[tr[2]];
  const double den = (b - a).cross(c - a);
  const double l1 = (p - a).cross(c - a) / den;
  const double l2 = (b - a).cross(p - a) / den;
  return (1.0 - l1 - l2) * f[tr[0]] + l1 * f[tr[1]] + l2 * f[tr[2]];
}

Vec2 SquareLocator::grad(const std::vector<double>& f, Vec2 p) const {
  const int t = find(p);
  const auto& tr = mesh_.tris[t];
  const auto g = mesh_.tri_grads(t);
  Vec2 out{0.0, 0.0};
  for (int i = 0; i < 3; ++i) out = out + g[i] * f[tr[i]];
  return out;
}

}  // namespace bhom
