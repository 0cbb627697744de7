#include "spacetime/slicer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace spacetime {
namespace {

constexpr std::array<std::array<int, 2>, 6> kEdges{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

bool share_vertex(int e, int f) {
  for (int a : kEdges[e])
    for (int b : kEdges[f])
      if (a == b) return true;
  return false;
}

// Chains items that meet on common tet faces into one cycle. `on_face(i, f)`
// says whether item i lies on face f (the face opposite vertex f).
template <class OnFace>
std::vector<int> chain(int count, OnFace on_face) {
  std::vector<std::vector<int>> adj(count);
  for (int f = 0; f < 4; ++f) {
    std::vector<int> here;
    for (int i = 0; i < count; ++i)
      if (on_face(i, f)) here.push_back(i);
    if (here.size() == 2) {
      adj[here[0]].push_back(here[1]);
      adj[here[1]].push_back(here[0]);
    }
  }
  std::vector<int> cyc;
  if (count == 0) return cyc;
  for (const auto& a : adj)
    if (a.size() != 2) return {};
  int prev = -1, cur = 0;
  do {
    cyc.push_back(cur);
    const auto& a = adj[cur];
    int next = a[0] == prev ? a[1] : (a[1] == prev ? a[0] : std::min(a[0], a[1]));
    prev = cur;
    cur = next;
  } while (cur != 0 && int(cyc.size()) <= count);
  if (int(cyc.size()) != count) return {};
  return cyc;
}

// Crossing point on segment ab, measured from the endpoint nearer the plane
// so an on-plane vertex comes back bit-exact.
Vec4 crossing(const Vec4& pa, const Vec4& pb, double da, double db) {
  if (std::abs(da) <= std::abs(db)) return pa + (da / (da - db)) * (pb - pa);
  return pb + (db / (db - da)) * (pa - pb);
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * norm(cross(b - a, c - a));
}

}  // namespace

std::array<Vec4, 3> Hyperplane::basis() const {
  const double nn = norm(n);
  if (!(nn > 0)) throw std::invalid_argument("hyperplane normal must be nonzero");
  const Vec4 u = n * (1.0 / nn);
  int drop = 0;
  for (int i = 1; i < 4; ++i)
    if (std::abs(n[i]) > std::abs(n[drop])) drop = i;
  std::array<Vec4, 3> b{};
  int k = 0;
  for (int i = 0; i < 4; ++i) {
    if (i == drop) continue;
    Vec4 e{};
    e[i] = 1.0;
    Vec4 v = e - dot(e, u) * u;
    for (int j = 0; j < k; ++j) v -= dot(v, b[j]) * b[j];
    b[k++] = v * (1.0 / norm(v));
  }
  return b;
}

Vec3 Hyperplane::project(const Vec4& p) const {
  const auto b = basis();
  const Vec4 q = p - c;
  return {dot(q, b[0]), dot(q, b[1]), dot(q, b[2])};
}

int case_code(const std::array<double, 4>& d) {
  int r = 0;
  for (int i = 0; i < 4; ++i)
    if (d[i] <= 0.0) r |= 1 << i;
  return r;
}

std::vector<int> oracle_edge_cycle(int code) {
  std::vector<int> crossed;
  for (int e = 0; e < 6; ++e) {
    const bool sa = (code >> kEdges[e][0]) & 1, sb = (code >> kEdges[e][1]) & 1;
    if (sa != sb) crossed.push_back(e);
  }
  const auto cyc = chain(int(crossed.size()), [&](int i, int f) {
    return kEdges[crossed[i]][0] != f && kEdges[crossed[i]][1] != f;
  });
  std::vector<int> out;
  for (int i : cyc) out.push_back(crossed[i]);
  // canonical start and direction: smallest edge first, then its smaller neighbor
  if (out.size() > 2) {
    auto it = std::min_element(out.begin(), out.end());
    std::rotate(out.begin(), it, out.end());
    if (out.back() < out[1]) std::reverse(out.begin() + 1, out.end());
  }
  return out;
}

std::vector<OraclePoint> clip_oracle(const std::array<Vec4, 4>& p, const Hyperplane& H) {
  std::array<double, 4> d{};
  for (int i = 0; i < 4; ++i) d[i] = H.distance(p[i]);
  std::vector<OraclePoint> pts;
  for (int i = 0; i < 4; ++i)
    if (d[i] == 0.0) pts.push_back({p[i], -1 - i});
  for (int e = 0; e < 6; ++e) {
    const int a = kEdges[e][0], b = kEdges[e][1];
    if ((d[a] < 0 && d[b] > 0) || (d[a] > 0 && d[b] < 0))
      pts.push_back({(d[b] * p[a] - d[a] * p[b]) * (1.0 / (d[b] - d[a])), e});
  }
  if (pts.size() < 3) return pts;
  const auto cyc = chain(int(pts.size()), [&](int i, int f) {
    if (pts[i].edge < 0) return -1 - pts[i].edge != f;
    return kEdges[pts[i].edge][0] != f && kEdges[pts[i].edge][1] != f;
  });
  if (cyc.empty()) return pts;  // degenerate contact; unordered
  std::vector<OraclePoint> out;
  for (int i : cyc) out.push_back(pts[i]);
  return out;
}

SliceTables derive_tables() {
  SliceTables t;
  for (int e = 0; e < 6; ++e) t.edge_endpoints[e] = kEdges[e];
  for (int r = 0; r < 16; ++r) {
    const auto cyc = oracle_edge_cycle(r);
    if (cyc.empty()) {
      t.shape_of_case[r] = SliceShape::None;
      t.case_edges[r] = {-1, -1, -1, -1};
    } else if (cyc.size() == 3) {
      t.shape_of_case[r] = SliceShape::Triangle;
      t.case_edges[r] = {cyc[0], cyc[1], cyc[2], cyc[2]};
    } else if (cyc.size() == 4) {
      // cycle c0 c1 c2 c3 -> slots e0 e1 e3 e2, so e1-e2 is the diagonal
      t.shape_of_case[r] = SliceShape::Quad;
      t.case_edges[r] = {cyc[0], cyc[1], cyc[3], cyc[2]};
    } else {
      throw std::logic_error("oracle produced an impossible polygon");
    }
  }
  // 6 output vertices per shape: two triangles over the case slots
  static constexpr std::array<std::array<int, 6>, 3> kTiles{{
      {0, 0, 0, 0, 0, 0},  // none: all collapse
      {0, 1, 2, 0, 0, 0},  // triangle + degenerate
      {0, 1, 2, 1, 3, 2},  // quad as (e0 e1 e2) (e1 e3 e2)
  }};
  for (int s = 0; s < 3; ++s)
    for (int j = 0; j < 6; ++j) t.v2e[s * 6 + j] = kTiles[s][j];
  validate_tables(t);
  return t;
}

const SliceTables& slice_tables() {
  static const SliceTables tables = derive_tables();
  return tables;
}

void validate_tables(const SliceTables& t) {
  auto fail = [](const std::string& m) { throw std::logic_error("slice tables: " + m); };
  for (int e = 0; e < 6; ++e)
    if (t.edge_endpoints[e] != kEdges[e]) fail("edge endpoint order");
  int none = 0;
  for (int r = 0; r < 16; ++r) {
    const int pc = std::popcount(unsigned(r));
    const SliceShape want = (pc == 0 || pc == 4) ? SliceShape::None
                            : pc == 2            ? SliceShape::Quad
                                                 : SliceShape::Triangle;
    if (t.shape_of_case[r] != want) fail("shape of case " + std::to_string(r));
    const auto& row = t.case_edges[r];
    std::set<int> listed;
    for (int s = 0; s < 4; ++s)
      if (row[s] >= 0) listed.insert(row[s]);
    std::set<int> crossed;
    for (int e = 0; e < 6; ++e)
      if (((r >> kEdges[e][0]) & 1) != ((r >> kEdges[e][1]) & 1)) crossed.insert(e);
    if (listed != crossed) fail("edge set of case " + std::to_string(r));
    const std::size_t n = listed.size();
    if (n != 0 && n != 3 && n != 4) fail("edge count");
    if (want == SliceShape::None) {
      ++none;
      if (row != std::array<int, 4>{-1, -1, -1, -1}) fail("empty row marker");
    }
    if (want == SliceShape::Triangle && row[3] != row[2]) fail("triangle padding");
    if (want == SliceShape::Quad) {
      if (!share_vertex(row[0], row[1]) || !share_vertex(row[1], row[3]) ||
          !share_vertex(row[3], row[2]) || !share_vertex(row[2], row[0]))
        fail("quad boundary order of case " + std::to_string(r));
      if (share_vertex(row[1], row[2])) fail("quad diagonal of case " + std::to_string(r));
    }
    std::set<int> mirror;
    for (int e : t.case_edges[15 - r])
      if (e >= 0) mirror.insert(e);
    if (mirror != listed) fail("symmetry r <-> 15-r");
  }
  if (none != 2) fail("empty case count");
  for (int v : t.v2e)
    if (v < 0 || v > 3) fail("v2e range");
}

std::optional<SlicePrimitive> slice_tet(const std::array<Vec4, 4>& p, const Hyperplane& H,
                                        const SliceTables& tables) {
  std::array<double, 4> d{};
  for (int i = 0; i < 4; ++i) d[i] = H.distance(p[i]);
  const int r = case_code(d);
  const SliceShape shape = tables.shape_of_case[r];
  if (shape == SliceShape::None) return std::nullopt;
  SlicePrimitive out;
  out.shape = shape;
  out.code = r;
  const int slots = shape == SliceShape::Quad ? 4 : 3;
  const auto basis = H.basis();
  for (int s = 0; s < slots; ++s) {
    const auto& ab = tables.edge_endpoints[tables.case_edges[r][s]];
    const int a = ab[0], b = ab[1];
    const Vec4 q = crossing(p[a], p[b], d[a], d[b]);
    out.points4.push_back(q);
    const Vec4 rel = q - H.c;
    out.points.push_back({dot(rel, basis[0]), dot(rel, basis[1]), dot(rel, basis[2])});
  }
  return out;
}

std::optional<SliceSegment> slice_triangle(const std::array<Vec4, 3>& p, const Hyperplane& H) {
  std::array<double, 3> d{};
  int r = 0;
  for (int i = 0; i < 3; ++i) {
    d[i] = H.distance(p[i]);
    if (d[i] <= 0.0) r |= 1 << i;
  }
  if (r == 0 || r == 7) return std::nullopt;
  SliceSegment seg;
  int k = 0;
  for (int i = 0; i < 3; ++i) {
    const int a = i, b = (i + 1) % 3;
    if (((r >> a) & 1) == ((r >> b) & 1)) continue;
    seg.p[k++] = H.project(crossing(p[a], p[b], d[a], d[b]));
  }
  return seg;
}

SliceResult slice_mesh(const SpacetimeMesh& mesh, const Hyperplane& H) {
  const SliceTables& tables = slice_tables();
  SliceResult res;
  std::vector<Tet> extra;
  if (!mesh.pentatopes.empty()) extra = expand_pentatopes(mesh);
  auto one = [&](const Tet& t) {
    ++res.tets_tested;
    const std::array<Vec4, 4> p{mesh.vertices[t.v[0]], mesh.vertices[t.v[1]], mesh.vertices[t.v[2]],
                                mesh.vertices[t.v[3]]};
    const auto prim = slice_tet(p, H, tables);
    if (!prim) return;
    const int shape = int(prim->shape);
    bool emitted = false;
    for (int half = 0; half < 2; ++half) {
      SliceTriangle tri;
      tri.tag = t.ref;
      tri.code = prim->code;
      for (int j = 0; j < 3; ++j) tri.p[j] = prim->points[tables.v2e[shape * 6 + half * 3 + j]];
      if (triangle_area(tri.p[0], tri.p[1], tri.p[2]) < kMinSliceArea) continue;
      for (int j = 0; j < 3; ++j) {
        const Vec3& a = tri.p[(j + 1) % 3];
        const Vec3& b = tri.p[(j + 2) % 3];
        tri.altitude[j] = {};
        tri.altitude[j][j] = 2.0 * triangle_area(tri.p[j], a, b) / norm(b - a);
      }
      if (prim->shape == SliceShape::Quad)
        for (auto& alt : tri.altitude) alt[half] = kDiagonalAltitude;  // hide the diagonal
      res.triangles.push_back(tri);
      emitted = true;
    }
    if (emitted) ++res.case_count[prim->code];
  };
  for (const Tet& t : mesh.tets) one(t);
  for (const Tet& t : extra) one(t);
  for (const Tri& t : mesh.triangles) {
    auto seg = slice_triangle({mesh.vertices[t.v[0]], mesh.vertices[t.v[1]], mesh.vertices[t.v[2]]}, H);
    if (seg) {
      seg->tag = t.ref;
      res.segments.push_back(*seg);
    }
  }
  return res;
}

double pentatope_slice_volume(const std::array<Vec4, 5>& p, const Hyperplane& H) {
  std::vector<std::vector<Vec3>> polys;
  Vec3 centre{};
  std::size_t count = 0;
  for (int skip = 0; skip < 5; ++skip) {
    std::array<Vec4, 4> f{};
    for (int i = 0, k = 0; i < 5; ++i)
      if (i != skip) f[k++] = p[i];
    auto prim = slice_tet(f, H);
    if (!prim) continue;
    for (const Vec3& q : prim->points) centre += q;
    count += prim->points.size();
    polys.push_back(std::move(prim->points));
  }
  if (count == 0) return 0.0;
  centre *= 1.0 / double(count);
  double vol = 0.0;
  for (const auto& poly : polys) {
    // slot order e0 e1 e2 [e3]; the quad tiles as (e0 e1 e2) (e1 e3 e2)
    vol += std::abs(dot(cross(poly[1] - poly[0], poly[2] - poly[0]), centre - poly[0])) / 6.0;
    if (poly.size() == 4)
      vol += std::abs(dot(cross(poly[3] - poly[1], poly[2] - poly[1]), centre - poly[1])) / 6.0;
  }
  return vol;
}

double slice_volume(const SpacetimeMesh& mesh, const Hyperplane& H) {
  KahanSum sum;
  for (const Pentatope& q : mesh.pentatopes) {
    std::array<Vec4, 5> p{};
    for (int i = 0; i < 5; ++i) p[i] = mesh.vertices[q.v[i]];
    sum.add(pentatope_slice_volume(p, H));
  }
  return sum.value();
}

}  // namespace spacetime
