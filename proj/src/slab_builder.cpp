#include "spacetime/slab_builder.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <string>
#include <tuple>
#include <unordered_map>

#include "spacetime/exact.hpp"
#include "spacetime/triangulate2.hpp"

namespace spacetime {
namespace {

constexpr std::int64_t kMax = exact::kFixedOne;

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

double orient_xyz(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return dot(cross(b - a, c - a), d - a);
}

}  // namespace

Vec4 steiner_coords(const Geometry& g, int face, const Vec2& uv, double t_lo, double t_hi, double w) {
  const Vec3 lo = g.eval_face(face, uv[0], uv[1], t_lo);
  const Vec3 hi = g.eval_face(face, uv[0], uv[1], t_hi);
  return with_time(lerp(lo, hi, w), lerp(t_lo, t_hi, w));
}

std::array<int, 2> connect_node(int node, const Slab& slab) {
  return {slab.bottom_offset + slab.bottom->node_vertex[node],
          slab.top_offset + slab.top->node_vertex[node]};
}

std::vector<std::array<int, 3>> connect_edge(const Geometry&, int edge, const Slab& slab) {
  PlanarDomain d;
  auto row = [&](const SurfaceTessellation& tess, int offset, double y, bool reversed) {
    const auto& poly = tess.edge_polyline[edge];
    const int n = int(poly.size());
    for (int j = 0; j < n; ++j) {
      const int i = reversed ? n - 1 - j : j;
      const std::int64_t S = i == 0 ? 0 : (i == n - 1 ? kMax : tess.vertices[poly[i]].k0);
      d.boundary.push_back({{exact::from_fixed(S), y}, std::uint64_t(offset + poly[i])});
    }
  };
  row(*slab.bottom, slab.bottom_offset, 0.0, false);
  row(*slab.top, slab.top_offset, 1.0, true);
  const Triangulation2 tri = triangulate_conforming(d);
  for (bool s : tri.steiner)
    if (s) throw TriangulationError("edge wall needed a Steiner point");
  std::vector<std::array<int, 3>> out;
  out.reserve(tri.triangles.size());
  for (const auto& t : tri.triangles)
    out.push_back({int(tri.points[t[0]].id), int(tri.points[t[1]].id), int(tri.points[t[2]].id)});
  return out;
}

FaceSlab connect_face(const Geometry& g, int face, const Slab& slab,
                      const std::vector<std::vector<std::array<int, 3>>>& walls, int apex_id,
                      LayerStrategy strategy) {
  LayerBox box;
  std::vector<int> global;
  std::unordered_map<int, int> local;
  auto layer = [&](const SurfaceTessellation& tess, int offset, std::int64_t level,
                   std::vector<std::array<int, 3>>& out) {
    for (const auto& t : tess.face_triangles[face]) {
      std::array<int, 3> lt{};
      for (int k = 0; k < 3; ++k) {
        const int gid = offset + t[k];
        auto [it, fresh] = local.emplace(gid, int(box.points.size()));
        if (fresh) {
          const auto c = tess.face_canon(g, face, t[k]);
          box.points.push_back({c[0], c[1], level, std::uint64_t(gid)});
          global.push_back(gid);
        }
        lt[k] = it->second;
      }
      out.push_back(lt);
    }
  };
  layer(*slab.bottom, slab.bottom_offset, 0, box.bottom);
  layer(*slab.top, slab.top_offset, 2, box.top);
  for (int k = 0; k < 4; ++k)
    for (const auto& t : walls.at(g.faces[face].side_edge[k])) {
      std::array<int, 3> lt{};
      for (int j = 0; j < 3; ++j) {
        auto it = local.find(t[j]);
        if (it == local.end()) throw TetrahedralizationError("edge wall vertex missing from face layers");
        lt[j] = it->second;
      }
      box.walls.push_back(lt);
    }

  const auto tets = tetrahedralize_layers(box, strategy);
  verify_layer_tets(box, tets);

  FaceSlab out;
  global.push_back(apex_id);
  out.tets.reserve(tets.size());
  for (const auto& t : tets) out.tets.push_back({global[t[0]], global[t[1]], global[t[2]], global[t[3]]});
  const FaceDef& fd = g.faces[face];
  out.apex.owner = {EntityKind::Face, face};
  out.apex.params = {lerp(fd.u0, fd.u1, 0.5), lerp(fd.v0, fd.v1, 0.5)};
  out.apex.w = 0.5;
  out.apex.coords = steiner_coords(g, face, out.apex.params, slab.t_lo, slab.t_hi, out.apex.w);
  return out;
}

std::vector<std::array<int, 4>> build_caps(const Geometry& g, const SurfaceTessellation& tess,
                                           int offset, bool final) {
  if (!g.prismatic) throw CapError("caps are only supported for the sphere-in-box geometry");
  std::map<std::tuple<int, int, int>, int> lookup;  // (kind, index, sample) -> vertex
  for (std::size_t i = 0; i < tess.vertices.size(); ++i) {
    const TessVertex& v = tess.vertices[i];
    lookup[{int(v.owner.kind), v.owner.index, v.sample}] = int(i);
  }
  std::vector<int> node_m(g.nodes.size(), -1), edge_m(g.edges.size(), -1), face_m(g.faces.size(), -1);
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    if (g.nodes[i].mirror_of >= 0) node_m[g.nodes[i].mirror_of] = int(i);
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    if (g.edges[i].mirror_of >= 0) edge_m[g.edges[i].mirror_of] = int(i);
  for (std::size_t i = 0; i < g.faces.size(); ++i)
    if (g.faces[i].mirror_of >= 0) face_m[g.faces[i].mirror_of] = int(i);
  auto image = [&](int vi) {
    const TessVertex& v = tess.vertices[vi];
    const auto& m = v.owner.kind == EntityKind::Node ? node_m
                    : v.owner.kind == EntityKind::Edge ? edge_m
                                                       : face_m;
    const int target = m[v.owner.index];
    auto it = lookup.find({int(v.owner.kind), target, v.sample});
    if (target < 0 || it == lookup.end()) throw CapError("vertex has no radial image");
    return it->second;
  };

  std::vector<std::array<int, 4>> out;
  for (std::size_t f = 0; f < g.faces.size(); ++f) {
    if (face_m[f] < 0) continue;
    for (const auto& t : tess.face_triangles[f]) {
      // prism: bottom = object triangle, top = its image; global ids
      std::array<int, 6> v{t[0], t[1], t[2], image(t[0]), image(t[1]), image(t[2])};
      for (int& x : v) x += offset;
      int m = int(std::min_element(v.begin(), v.end()) - v.begin());
      if (m >= 3) {
        std::swap_ranges(v.begin(), v.begin() + 3, v.begin() + 3);
        m -= 3;
      }
      std::array<int, 6> r{};
      for (int i = 0; i < 3; ++i) {
        r[i] = v[(m + i) % 3];
        r[i + 3] = v[3 + (m + i) % 3];
      }
      // quad faces through r0 take diagonals from r0; the far quad takes
      // the diagonal through its smallest vertex
      std::array<std::array<int, 4>, 3> split;
      if (std::min(r[1], r[5]) < std::min(r[2], r[4]))
        split = {{{r[0], r[1], r[2], r[5]}, {r[0], r[1], r[5], r[4]}, {r[0], r[4], r[5], r[3]}}};
      else
        split = {{{r[0], r[1], r[2], r[4]}, {r[0], r[4], r[2], r[5]}, {r[0], r[4], r[5], r[3]}}};
      for (auto q : split) {
        const double o = orient_xyz(tess.vertices[q[0] - offset].x, tess.vertices[q[1] - offset].x,
                                    tess.vertices[q[2] - offset].x, tess.vertices[q[3] - offset].x);
        if (o == 0.0) throw CapError("flat cap tetrahedron");
        if ((o > 0) != final) std::swap(q[0], q[1]);
        out.push_back(q);
      }
    }
  }
  return out;
}

BuildResult build_spacetime_mesh(const Geometry& g, const BuildOptions& opt) {
  if (opt.slabs < 1) throw GeometryError("slab count must be >= 1");
  if (opt.caps == CapMode::Closed && !g.prismatic)
    throw CapError("closed caps are only supported for sphere cases; use open mode");
  BuildResult res;
  Stopwatch clock;

  const int n = opt.slabs;
  std::vector<double> times(n + 1);
  for (int k = 0; k <= n; ++k) times[k] = g.t0 + double(k) * (g.tf - g.t0) / double(n);
  times[n] = g.tf;
  for (int k = 0; k <= n; ++k) res.tessellations.push_back(tessellate(g, times[k], opt.h));
  res.timings.tessellation = clock.lap();

  SpacetimeMesh& mesh = res.mesh;
  for (int k = 0; k <= n; ++k) {
    res.offsets.push_back(int(mesh.vertices.size()));
    for (const TessVertex& v : res.tessellations[k].vertices) mesh.add_vertex(with_time(v.x, times[k]));
  }
  const int nf = int(g.faces.size());
  const int steiner_base = int(mesh.vertices.size());

  std::vector<std::vector<std::array<int, 3>>> walls(g.edges.size());
  for (int k = 0; k < n; ++k) {
    Slab slab{k, times[k], times[k + 1], &res.tessellations[k], &res.tessellations[k + 1],
              res.offsets[k], res.offsets[k + 1]};
    clock.lap();
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
      mesh.segments.push_back({connect_node(int(i), slab), int(i)});
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      walls[e] = connect_edge(g, int(e), slab);
      for (const auto& t : walls[e]) mesh.triangles.push_back({t, int(e)});
    }
    res.timings.edge_triangulation += clock.lap();
    for (int f = 0; f < nf; ++f) {
      const int apex = steiner_base + k * nf + f;
      FaceSlab fs = connect_face(g, f, slab, walls, apex, opt.strategy);
      for (const auto& t : fs.tets) mesh.tets.push_back({t, f});
      res.steiner.push_back({apex, k, fs.apex, slab.t_lo, slab.t_hi});
    }
    res.timings.face_tetrahedralization += clock.lap();
  }
  for (const SteinerRecord& s : res.steiner) {
    const int id = mesh.add_vertex(s.steiner.coords, 1);
    if (id != s.vertex) throw MeshError("Steiner id assignment out of order");
  }

  if (opt.caps == CapMode::Closed) {
    clock.lap();
    for (const auto& t : build_caps(g, res.tessellations.front(), res.offsets.front(), false))
      mesh.tets.push_back({t, nf});
    for (const auto& t : build_caps(g, res.tessellations.back(), res.offsets.back(), true))
      mesh.tets.push_back({t, nf + 1});
    res.timings.caps = clock.lap();
  }
  mesh.validate();
  return res;
}

}  // namespace spacetime
