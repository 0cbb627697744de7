#include "spacetime/mesh4.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <unordered_map>

namespace spacetime {
namespace {

// Parity of the permutation that sorts a small array (true = odd).
template <std::size_t N>
bool sort_parity(std::array<int, N>& a) {
  bool odd = false;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j + 1 < N - i; ++j)
      if (a[j] > a[j + 1]) {
        std::swap(a[j], a[j + 1]);
        odd = !odd;
      }
  return odd;
}

struct FaceKeyHash {
  std::size_t operator()(const std::array<int, 3>& k) const {
    std::uint64_t h = 1469598103934665603ull;
    for (int x : k) h = (h ^ std::uint64_t(std::uint32_t(x))) * 1099511628211ull;
    return std::size_t(h);
  }
};

double det3(const Vec4& a, const Vec4& b, const Vec4& c, int i, int j, int k) {
  return a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i]) +
         a[k] * (b[i] * c[j] - b[j] * c[i]);
}

}  // namespace

int SpacetimeMesh::add_vertex(const Vec4& p, int ref) {
  vertices.push_back(p);
  vertex_ref.push_back(ref);
  return int(vertices.size()) - 1;
}

std::size_t SpacetimeMesh::steiner_count() const {
  return std::size_t(std::count(vertex_ref.begin(), vertex_ref.end(), 1));
}

void SpacetimeMesh::validate() const {
  const int nv = int(vertices.size());
  if (vertex_ref.size() != vertices.size()) throw MeshError("vertex ref count mismatch");
  auto check = [nv](const auto& cells, const char* what) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      auto v = cells[i].v;
      for (int x : v)
        if (x < 0 || x >= nv)
          throw MeshError(std::string(what) + " " + std::to_string(i) + " has an out-of-range vertex");
      std::sort(v.begin(), v.end());
      if (std::adjacent_find(v.begin(), v.end()) != v.end())
        throw MeshError(std::string(what) + " " + std::to_string(i) + " repeats a vertex");
    }
  };
  check(tets, "tetrahedron");
  check(triangles, "triangle");
  check(segments, "segment");
  check(pentatopes, "pentatope");
}

std::array<Vec4, 2> SpacetimeMesh::bounding_box() const {
  if (vertices.empty()) return {Vec4{}, Vec4{}};
  Vec4 lo = vertices[0], hi = vertices[0];
  for (const Vec4& p : vertices)
    for (int i = 0; i < 4; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  return {lo, hi};
}

ManifoldReport check_manifold(const SpacetimeMesh& mesh, const ManifoldMode& mode) {
  struct Inc {
    int count = 0;
    int sign_sum = 0;
  };
  std::unordered_map<std::array<int, 3>, Inc, FaceKeyHash> faces;
  faces.reserve(mesh.tets.size() * 3);
  for (const Tet& t : mesh.tets)
    for (int i = 0; i < 4; ++i) {
      std::array<int, 3> f{};
      for (int j = 0, k = 0; j < 4; ++j)
        if (j != i) f[k++] = t.v[j];
      const bool odd = sort_parity(f);
      const int sign = ((i % 2 == 1) != odd) ? -1 : 1;
      Inc& inc = faces[f];
      ++inc.count;
      inc.sign_sum += sign;
    }

  ManifoldReport rep;
  rep.faces = faces.size();
  auto flat_at_end = [&](const std::array<int, 3>& f) {
    for (double te : {mode.t0, mode.tf}) {
      bool all = true;
      for (int x : f) all = all && mesh.vertices[x][3] == te;
      if (all) return true;
    }
    return false;
  };
  std::vector<std::array<int, 3>> bad;
  for (const auto& [f, inc] : faces) {
    bool ok;
    if (inc.count == 2) {
      ok = inc.sign_sum == 0;
      if (!ok) ++rep.bad_orientation;
    } else if (inc.count == 1 && !mode.closed && flat_at_end(f)) {
      ok = true;
      ++rep.boundary_faces;
    } else {
      ok = false;
      ++rep.bad_count;
    }
    if (!ok) bad.push_back(f);
  }
  std::sort(bad.begin(), bad.end());
  if (bad.size() > 16) bad.resize(16);
  rep.offending = std::move(bad);
  rep.pass = !mesh.tets.empty() && rep.bad_count == 0 && rep.bad_orientation == 0;
  return rep;
}

double tet_measure3(const Vec4& p0, const Vec4& p1, const Vec4& p2, const Vec4& p3) {
  const Vec4 a = p1 - p0, b = p2 - p0, c = p3 - p0;
  // Cauchy-Binet: det(G^T G) is the sum of the squared 3x3 minors.
  static constexpr int rows[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  double s = 0.0;
  for (const auto& r : rows) {
    const double m = det3(a, b, c, r[0], r[1], r[2]);
    s += m * m;
  }
  return std::sqrt(s) / 6.0;
}

double pentatope_measure4(const std::array<Vec4, 5>& p) {
  double m[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m[i][j] = p[i + 1][j] - p[0][j];
  // Gaussian elimination with partial pivoting
  double det = 1.0;
  for (int c = 0; c < 4; ++c) {
    int piv = c;
    for (int r = c + 1; r < 4; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (m[piv][c] == 0.0) return 0.0;
    if (piv != c) {
      for (int j = 0; j < 4; ++j) std::swap(m[piv][j], m[c][j]);
      det = -det;
    }
    det *= m[c][c];
    for (int r = c + 1; r < 4; ++r) {
      const double f = m[r][c] / m[c][c];
      for (int j = c; j < 4; ++j) m[r][j] -= f * m[c][j];
    }
  }
  return det / 24.0;
}

VolumeReport measure_volume(const SpacetimeMesh& mesh) {
  VolumeReport rep;
  KahanSum total;
  std::map<int, KahanSum> tags;
  for (const Tet& t : mesh.tets) {
    const double v = tet_measure3(mesh.vertices[t.v[0]], mesh.vertices[t.v[1]],
                                  mesh.vertices[t.v[2]], mesh.vertices[t.v[3]]);
    total.add(v);
    tags[t.ref].add(v);
  }
  rep.total = total.value();
  for (const auto& [tag, s] : tags) rep.per_tag[tag] = s.value();
  return rep;
}

VolumeReport measure_volume(const SpacetimeMesh& mesh, double expected) {
  VolumeReport rep = measure_volume(mesh);
  rep.expected = expected;
  rep.abs_error = std::abs(rep.total - expected);
  rep.rel_error = expected != 0.0 ? rep.abs_error / std::abs(expected) : rep.abs_error;
  return rep;
}

double v_hypercone_sphere(double r, double h) {
  return 4.0 * std::numbers::pi * r * r / 3.0 * std::sqrt(r * r + h * h);
}

double v_hypercone_torus(double r, double R, double h) {
  return 4.0 * std::numbers::pi * std::numbers::pi * r * R / 3.0 * std::sqrt(R * R + h * h);
}

double expected_volume(const CaseSpec& c, bool closed) {
  const double pi = std::numbers::pi;
  const double dt = c.tf - c.t0;
  const double walls = 6.0 * c.l * c.l * dt;
  const double cube = c.l * c.l * c.l;
  if (c.name == "box") return walls;
  if (c.name == "static-sphere") {
    double v = walls + 4.0 * pi * c.r0 * c.r0 * dt;
    if (closed) v += 2.0 * (cube - 4.0 / 3.0 * pi * c.r0 * c.r0 * c.r0);
    return v;
  }
  if (c.name == "expanding-sphere") {
    if (!(c.rf > c.r0)) throw MeshError("expanding sphere needs rf > r0");
    const double a = c.r0 / (c.rf - c.r0);
    double v = walls + v_hypercone_sphere(c.rf, (a + 1.0) * dt) - v_hypercone_sphere(c.r0, a * dt);
    if (closed)
      v += 2.0 * cube - 4.0 / 3.0 * pi * (c.r0 * c.r0 * c.r0 + c.rf * c.rf * c.rf);
    return v;
  }
  if (c.name == "expanding-torus") {
    if (!(c.Rf > c.R0)) throw MeshError("expanding torus needs Rf > R0");
    const double a = c.R0 / (c.Rf - c.R0);
    double v = walls + v_hypercone_torus(c.rf, c.Rf, (a + 1.0) * dt) -
               v_hypercone_torus(c.r0, c.R0, a * dt);
    // solid torus volume is 2 pi^2 R r^2
    if (closed)
      v += 2.0 * cube - 2.0 * pi * pi * (c.R0 * c.r0 * c.r0 + c.Rf * c.rf * c.rf);
    return v;
  }
  throw MeshError("no volume oracle for case '" + c.name + "'");
}

SpacetimeMesh kuhn_pentatopes(int n) {
  if (n < 1) throw MeshError("kuhn subdivision must be >= 1");
  SpacetimeMesh m;
  const int s = n + 1;
  auto id = [s](int i, int j, int k, int l) { return ((l * s + k) * s + j) * s + i; };
  for (int l = 0; l <= n; ++l)
    for (int k = 0; k <= n; ++k)
      for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
          m.add_vertex({double(i) / n, double(j) / n, double(k) / n, double(l) / n});

  std::array<int, 4> perm{0, 1, 2, 3};
  std::vector<std::array<int, 4>> perms;
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));

  int cell = 0;
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i, ++cell)
          for (const auto& p : perms) {
            std::array<int, 4> c{i, j, k, l};
            Pentatope pt;
            pt.ref = cell;
            pt.v[0] = id(c[0], c[1], c[2], c[3]);
            for (int a = 0; a < 4; ++a) {
              ++c[p[a]];
              pt.v[a + 1] = id(c[0], c[1], c[2], c[3]);
            }
            // orientation equals the permutation sign; make it positive
            std::array<int, 4> q = p;
            if (sort_parity(q)) std::swap(pt.v[3], pt.v[4]);
            m.pentatopes.push_back(pt);
          }
  return m;
}

std::array<std::array<int, 4>, 5> pentatope_boundary_tets(const std::array<int, 5>& p) {
  std::array<std::array<int, 4>, 5> out{};
  for (int i = 0; i < 5; ++i) {
    for (int j = 0, k = 0; j < 5; ++j)
      if (j != i) out[i][k++] = p[j];
    // facet i carries sign (-1)^i; the outward one is the opposite for even i
    if (i % 2 == 0) std::swap(out[i][0], out[i][1]);
  }
  return out;
}

std::vector<Tet> expand_pentatopes(const SpacetimeMesh& mesh) {
  std::vector<Tet> out;
  std::map<std::array<int, 4>, int> seen;
  for (const Pentatope& pt : mesh.pentatopes)
    for (const auto& t : pentatope_boundary_tets(pt.v)) {
      std::array<int, 4> k = t;
      std::sort(k.begin(), k.end());
      if (seen.emplace(k, int(out.size())).second) out.push_back({t, pt.ref});
    }
  return out;
}

}  // namespace spacetime
