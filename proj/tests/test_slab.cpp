#include <gtest/gtest.h>

#include <map>
#include <set>

#include "spacetime/slab_builder.hpp"

using namespace spacetime;

namespace {

using Key3 = std::array<int, 3>;

Key3 sorted(std::array<int, 3> k) {
  std::sort(k.begin(), k.end());
  return k;
}

std::map<Key3, int> tet_face_counts(const SpacetimeMesh& m) {
  std::map<Key3, int> c;
  for (const Tet& t : m.tets)
    for (int i = 0; i < 4; ++i) {
      Key3 f{};
      for (int j = 0, k = 0; j < 4; ++j)
        if (j != i) f[k++] = t.v[j];
      ++c[sorted(f)];
    }
  return c;
}

BuildResult build(const Geometry& g, int slabs, double h, CapMode caps,
                  LayerStrategy s = LayerStrategy::Local) {
  BuildOptions o;
  o.slabs = slabs;
  o.h = h;
  o.caps = caps;
  o.strategy = s;
  return build_spacetime_mesh(g, o);
}

}  // namespace

TEST(SlabBuilder, StaticBoxIsExact) {
  const Geometry g = make_box(1.0);
  const BuildResult r = build(g, 1, 0.5, CapMode::Open);
  const VolumeReport v = measure_volume(r.mesh, 6.0);
  EXPECT_NEAR(v.total, 6.0, 1e-12);
  EXPECT_TRUE(check_manifold(r.mesh, ManifoldMode::with_boundary(0.0, 1.0)).pass);
}

TEST(SlabBuilder, ConnectNodeOnStaticBox) {
  const Geometry g = make_box(1.0);
  const BuildResult r = build(g, 1, 0.5, CapMode::Open);
  ASSERT_EQ(r.mesh.segments.size(), g.nodes.size());
  for (const Seg& s : r.mesh.segments) {
    const Vec4 a = r.mesh.vertices[s.v[0]], b = r.mesh.vertices[s.v[1]];
    EXPECT_EQ(a[3], 0.0);
    EXPECT_EQ(b[3], 1.0);
    for (int k = 0; k < 3; ++k) EXPECT_EQ(a[k], b[k]);
    EXPECT_EQ(std::abs(a[0]), 0.5);
  }
}

TEST(SlabBuilder, NodeSegmentsChainAndMoveRadially) {
  const int n = 4;
  const Geometry g = make_sphere_in_box(0.1, 0.125, 1.0);
  const BuildResult r = build(g, n, 0.05, CapMode::Closed);
  ASSERT_EQ(r.mesh.segments.size(), g.nodes.size() * n);
  for (std::size_t node = 0; node < 8; ++node) {  // sphere corners
    for (int k = 0; k < n; ++k) {
      const Seg& s = r.mesh.segments[k * g.nodes.size() + node];
      EXPECT_EQ(s.ref, int(node));
      if (k > 0) EXPECT_EQ(s.v[0], r.mesh.segments[(k - 1) * g.nodes.size() + node].v[1]);
      const Vec4 a = r.mesh.vertices[s.v[0]], b = r.mesh.vertices[s.v[1]];
      const Vec3 pa{a[0], a[1], a[2]}, pb{b[0], b[1], b[2]};
      const Vec3 dir = pa * (1.0 / norm(pa));
      EXPECT_NEAR(norm(pb - pa - dir * (0.025 / n)), 0.0, 1e-14);
    }
  }
}

TEST(SlabBuilder, EdgeWallsReuseBothPolylines) {
  const Geometry g = make_sphere_in_box(0.1, 0.125, 1.0);
  const auto b = tessellate(g, 0.0, 0.01), t = tessellate(g, 1.0, 0.01);
  const int off = int(b.vertices.size());
  const Slab slab{0, 0.0, 1.0, &b, &t, 0, off};
  for (int e = 0; e < 12; ++e) {
    const auto wall = connect_edge(g, e, slab);
    const int mb = int(b.edge_polyline[e].size()) - 1, mt = int(t.edge_polyline[e].size()) - 1;
    EXPECT_NE(mb, mt);  // the sphere grew, different resolutions
    EXPECT_EQ(int(wall.size()), mb + mt);
    std::set<std::pair<int, int>> edges;
    for (const auto& tr : wall)
      for (int k = 0; k < 3; ++k)
        edges.insert({std::min(tr[k], tr[(k + 1) % 3]), std::max(tr[k], tr[(k + 1) % 3])});
    for (int i = 0; i < mb; ++i) {
      const int p = b.edge_polyline[e][i], q = b.edge_polyline[e][i + 1];
      EXPECT_TRUE(edges.count({std::min(p, q), std::max(p, q)}));
    }
    for (int i = 0; i < mt; ++i) {
      const int p = off + t.edge_polyline[e][i], q = off + t.edge_polyline[e][i + 1];
      EXPECT_TRUE(edges.count({std::min(p, q), std::max(p, q)}));
    }
  }
}

TEST(SlabBuilder, SteinerAccounting) {
  const Geometry g = make_sphere_in_box(0.1, 0.125, 1.0);
  const int n = 10;
  const BuildResult r = build(g, n, 0.04, CapMode::Closed);
  EXPECT_EQ(r.steiner.size(), g.faces.size() * n);
  EXPECT_EQ(r.mesh.steiner_count(), g.faces.size() * n);
  std::size_t tess_vertices = 0;
  for (const auto& t : r.tessellations) tess_vertices += t.vertices.size();
  EXPECT_EQ(r.mesh.vertices.size(), tess_vertices + r.steiner.size());
  for (const SteinerRecord& s : r.steiner) {
    const int f = s.steiner.owner.index;
    const Vec2 uv = s.steiner.params;
    const double w = s.steiner.w;
    EXPECT_EQ(w, 0.5);
    const Vec3 x = (1 - w) * g.eval_face(f, uv[0], uv[1], s.t_lo) + w * g.eval_face(f, uv[0], uv[1], s.t_hi);
    const Vec4 want = with_time(x, (1 - w) * s.t_lo + w * s.t_hi);
    const Vec4 got = r.mesh.vertices[s.vertex];
    EXPECT_LE(norm(got - want), 1e-12 * norm(want));
    EXPECT_EQ(r.mesh.vertex_ref[s.vertex], 1);
  }
}

TEST(SlabBuilder, InterSlabAndCapConformity) {
  const Geometry g = make_sphere_in_box(0.1, 0.125, 1.0);
  const int n = 3;
  const BuildResult r = build(g, n, 0.05, CapMode::Closed);
  const auto faces = tet_face_counts(r.mesh);
  for (int k = 0; k <= n; ++k) {
    const int off = r.offsets[k];
    for (const auto& t : r.tessellations[k].triangles()) {
      const auto it = faces.find(sorted({off + t.v[0], off + t.v[1], off + t.v[2]}));
      ASSERT_NE(it, faces.end());
      EXPECT_EQ(it->second, 2) << "time step " << k;  // slab below/above, or a cap
    }
  }
  // Edge wall triangles bound exactly the two incident Face volumes
  for (const Tri& t : r.mesh.triangles) {
    const auto it = faces.find(sorted(t.v));
    ASSERT_NE(it, faces.end());
    EXPECT_EQ(it->second, 2);
  }
}

TEST(SlabBuilder, CapsArePrismatic) {
  const Geometry g = make_sphere_in_box(0.1, 0.125, 1.0);
  const SurfaceTessellation T = tessellate(g, 0.0, 0.02);
  std::size_t sphere_tris = 0;
  for (int f = 0; f < 6; ++f) sphere_tris += T.face_triangles[f].size();
  const auto cap = build_caps(g, T, 0, false);
  EXPECT_EQ(cap.size(), 3 * sphere_tris);
  double vol = 0.0;
  for (const auto& t : cap) {
    const Vec3 a = T.vertices[t[0]].x;
    const double o = dot(cross(T.vertices[t[1]].x - a, T.vertices[t[2]].x - a), T.vertices[t[3]].x - a) / 6.0;
    EXPECT_LT(o, 0.0);  // initial cap orientation
    vol -= o;
  }
  const double exact = 1.0 - 4.0 / 3.0 * std::acos(-1.0) * 1e-3;
  EXPECT_NEAR(vol, exact, 2e-4);
  EXPECT_GT(vol, exact);  // inscribed polyhedron removes less than the ball
}

TEST(SlabBuilder, SphereMeshesAreClosedManifolds) {
  for (const char* name : {"static-sphere", "expanding-sphere"}) {
    CaseSpec c;
    c.name = name;
    const Geometry g = make_case_geometry(c);
    for (auto s : {LayerStrategy::Local, LayerStrategy::Cone}) {
      const BuildResult r = build(g, 10, 0.05, CapMode::Closed, s);
      const ManifoldReport m = check_manifold(r.mesh, ManifoldMode::closed_mode());
      EXPECT_TRUE(m.pass) << name;
      EXPECT_EQ(m.bad_orientation, 0u);
      const ManifoldReport open = check_manifold(build(g, 2, 0.05, CapMode::Open, s).mesh,
                                                 ManifoldMode::with_boundary(0.0, 1.0));
      EXPECT_TRUE(open.pass);
      EXPECT_GT(open.boundary_faces, 0u);
    }
  }
}

TEST(SlabBuilder, TorusIsOpenOnly) {
  CaseSpec c;
  c.name = "expanding-torus";
  const Geometry g = make_case_geometry(c);
  EXPECT_THROW(build(g, 1, 0.1, CapMode::Closed), CapError);
  const BuildResult r = build(g, 2, 0.08, CapMode::Open);
  EXPECT_TRUE(check_manifold(r.mesh, ManifoldMode::with_boundary(0.0, 1.0)).pass);
}

TEST(SlabBuilder, ElementTags) {
  const Geometry g = make_sphere_in_box(0.1, 0.125, 1.0);
  const BuildResult r = build(g, 2, 0.06, CapMode::Closed);
  const int nf = int(g.faces.size());
  std::set<int> tet_tags, tri_tags, seg_tags;
  for (const Tet& t : r.mesh.tets) tet_tags.insert(t.ref);
  for (const Tri& t : r.mesh.triangles) tri_tags.insert(t.ref);
  for (const Seg& s : r.mesh.segments) seg_tags.insert(s.ref);
  EXPECT_EQ(int(tet_tags.size()), nf + 2);
  EXPECT_EQ(*tet_tags.rbegin(), nf + 1);
  EXPECT_EQ(tri_tags.size(), g.edges.size());
  EXPECT_EQ(seg_tags.size(), g.nodes.size());
}

TEST(SlabBuilder, Deterministic) {
  const Geometry g = make_sphere_in_box(0.1, 0.125, 1.0);
  EXPECT_EQ(build(g, 2, 0.06, CapMode::Closed).mesh, build(g, 2, 0.06, CapMode::Closed).mesh);
}
