#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "spacetime/tessellator.hpp"

using namespace spacetime;

namespace {

std::vector<int> body_faces(const Geometry& g, int body) { return g.bodies[body].faces; }

Vec3 tri_normal(const SurfaceTessellation& T, const std::array<int, 3>& t) {
  return cross(T.vertices[t[1]].x - T.vertices[t[0]].x, T.vertices[t[2]].x - T.vertices[t[0]].x);
}

Vec3 tri_centroid(const SurfaceTessellation& T, const std::array<int, 3>& t) {
  return (T.vertices[t[0]].x + T.vertices[t[1]].x + T.vertices[t[2]].x) * (1.0 / 3.0);
}

void expect_watertight(const Geometry& g, const SurfaceTessellation& T) {
  for (std::size_t f = 0; f < g.faces.size(); ++f) {
    std::map<std::pair<int, int>, int> directed;
    for (const auto& t : T.face_triangles[f])
      for (int k = 0; k < 3; ++k) ++directed[{t[k], t[(k + 1) % 3]}];
    // boundary edges of the face are exactly the Edge polyline segments
    const auto loop = T.face_boundary(g, int(f));
    std::set<std::pair<int, int>> boundary;
    for (std::size_t i = 0; i < loop.size(); ++i) boundary.insert({loop[i], loop[(i + 1) % loop.size()]});
    for (const auto& [e, n] : directed) {
      ASSERT_EQ(n, 1);
      const bool paired = directed.count({e.second, e.first}) > 0;
      EXPECT_NE(paired, boundary.count(e) > 0) << "face " << f;
    }
    for (const auto& e : boundary) EXPECT_EQ(directed.count(e), 1u);
  }
  // whole surface: every undirected edge used exactly twice, once per direction
  std::map<std::pair<int, int>, int> all;
  for (const auto& t : T.triangles())
    for (int k = 0; k < 3; ++k) ++all[{t.v[k], t.v[(k + 1) % 3]}];
  for (const auto& [e, n] : all) {
    EXPECT_EQ(n, 1);
    EXPECT_EQ(all.count({e.second, e.first}), 1u);
  }
}

void expect_params_consistent(const Geometry& g, const SurfaceTessellation& T, double l) {
  for (const TessVertex& v : T.vertices) {
    Vec3 x;
    switch (v.owner.kind) {
      case EntityKind::Node: x = g.eval_node(v.owner.index, T.time); break;
      case EntityKind::Edge: x = g.eval_edge(v.owner.index, v.params[0], T.time); break;
      case EntityKind::Face: x = g.eval_face(v.owner.index, v.params[0], v.params[1], T.time); break;
    }
    EXPECT_LT(norm(x - v.x), 1e-10 * l);
  }
}

}  // namespace

TEST(Tessellator, EulerCharacteristics) {
  const Geometry s = make_sphere_in_box(0.1, 0.125, 1.0);
  const SurfaceTessellation ts = tessellate(s, 0.0, 0.05);
  EXPECT_EQ(euler_characteristic(ts, body_faces(s, 0)), 2);
  EXPECT_EQ(euler_characteristic(ts, body_faces(s, 1)), 2);
  const Geometry t = make_torus_in_box(0.1, 0.4, 0.125, 0.5, 1.0);
  const SurfaceTessellation tt = tessellate(t, 0.5, 0.05);
  EXPECT_EQ(euler_characteristic(tt, body_faces(t, 0)), 0);
  EXPECT_EQ(euler_characteristic(tt, body_faces(t, 1)), 2);
}

TEST(Tessellator, WatertightAndConsistentOverRandomRuns) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const Geometry sphere = make_sphere_in_box(0.1, 0.125, 1.0);
  const Geometry torus = make_torus_in_box(0.1, 0.4, 0.125, 0.5, 1.0);
  for (int i = 0; i < 10; ++i) {
    const double t = U(rng), h = 0.03 + 0.1 * U(rng);
    for (const Geometry* g : {&sphere, &torus}) {
      const SurfaceTessellation T = tessellate(*g, t, h);
      expect_watertight(*g, T);
      expect_params_consistent(*g, T, 1.0);
    }
  }
}

TEST(Tessellator, NodesAreSharedByIncidentEdges) {
  const Geometry g = make_sphere_in_box(0.1, 0.125, 1.0);
  const SurfaceTessellation T = tessellate(g, 0.0, 0.04);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto& poly = T.edge_polyline[e];
    EXPECT_EQ(poly.front(), T.node_vertex[g.edges[e].nodes[0]]);
    EXPECT_EQ(poly.back(), T.node_vertex[g.edges[e].nodes[1]]);
  }
}

TEST(Tessellator, OutwardOrientation) {
  const Geometry g = make_sphere_in_box(0.1, 0.125, 1.0);
  const SurfaceTessellation T = tessellate(g, 0.3, 0.04);
  for (std::size_t f = 0; f < g.faces.size(); ++f) {
    const bool box = g.faces[f].body == 1;
    for (const auto& t : T.face_triangles[f]) {
      const double s = dot(tri_normal(T, t), tri_centroid(T, t));
      // sphere normals point away from the solid, box normals into the domain
      if (box)
        EXPECT_LT(s, 0.0);
      else
        EXPECT_GT(s, 0.0);
    }
  }
}

TEST(Tessellator, BoxFaceHalfSplit) {
  const Geometry g = make_box(1.0);
  const SurfaceTessellation T = tessellate(g, 0.0, 0.5);
  for (const auto& poly : T.edge_polyline) EXPECT_EQ(poly.size(), 3u);
  for (std::size_t f = 0; f < g.faces.size(); ++f) {
    double area = 0.0;
    for (const auto& t : T.face_triangles[f]) area += 0.5 * norm(tri_normal(T, t));
    EXPECT_NEAR(area, 1.0, 1e-14);
  }
}

TEST(Tessellator, ResolutionFollowsGrowth) {
  const Geometry g = make_sphere_in_box(0.1, 0.125, 1.0);
  const SurfaceTessellation a = tessellate(g, 0.0, 0.02), b = tessellate(g, 1.0, 0.02);
  EXPECT_NE(a.vertices.size(), b.vertices.size());
  EXPECT_LT(a.vertices.size(), b.vertices.size());
}

TEST(Tessellator, EdgeSegmentsFollowArclength) {
  const Geometry g = make_sphere_in_box(0.1, 0.125, 1.0);
  const double h = 0.01;
  const SurfaceTessellation T = tessellate(g, 0.0, h);
  for (std::size_t e = 0; e < 12; ++e) {  // sphere edges, scale 0.1 at t = 0
    const double L = 0.1 * edge_base_length(g, int(e));
    const auto& poly = T.edge_polyline[e];
    EXPECT_EQ(long(poly.size()) - 1, std::max(1L, std::lround(L / h)));
    // uniform in arclength: chords nearly equal
    double lo = 1e9, hi = 0;
    for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
      const double c = norm(T.vertices[poly[i + 1]].x - T.vertices[poly[i]].x);
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    EXPECT_LT(hi / lo, 1.001);
  }
  // cube edge seen from the center: angle between adjacent corner directions
  EXPECT_NEAR(edge_base_length(g, 0), std::acos(1.0 / 3.0), 1e-10);
}

TEST(Tessellator, RejectsBadArguments) {
  const Geometry g = make_box(1.0);
  EXPECT_THROW(tessellate(g, 0.0, 0.0), GeometryError);
  EXPECT_THROW(tessellate(g, 2.0, 0.1), GeometryError);
}
