#include "spacetime/tessellator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "spacetime/exact.hpp"
#include "spacetime/triangulate2.hpp"

namespace spacetime {
namespace {

constexpr std::int64_t kMax = exact::kFixedOne;

// Arclength of a curve c(sigma), sigma in [0, 1]: composite 4-point
// Gauss-Legendre over 16 panels of a finite-difference speed.
class ArcLength {
 public:
  explicit ArcLength(std::function<Vec3(double)> c) : c_(std::move(c)) {
    for (int p = 0; p < kPanels; ++p) {
      panel_[p] = integrate(double(p) / kPanels, double(p + 1) / kPanels);
      total_ += panel_[p];
    }
  }

  double total() const { return total_; }

  double speed(double s) const {
    constexpr double d = 1e-3;
    const Vec3 g = (c_(s - 2 * d) - c_(s + 2 * d) + 8.0 * (c_(s + d) - c_(s - d))) * (1.0 / (12 * d));
    return norm(g);
  }

  double upto(double s) const {
    const int p = std::clamp(int(s * kPanels), 0, kPanels - 1);
    double a = 0.0;
    for (int i = 0; i < p; ++i) a += panel_[i];
    return a + integrate(double(p) / kPanels, s);
  }

  /// sigma with upto(sigma) = target.
  double invert(double target) const {
    double s = std::clamp(target / total_, 0.0, 1.0);
    for (int it = 0; it < 50; ++it) {
      const double ds = (upto(s) - target) / speed(s);
      s = std::clamp(s - ds, 0.0, 1.0);
      if (std::abs(ds) < 1e-15) break;
    }
    return s;
  }

 private:
  static constexpr int kPanels = 16;

  double integrate(double a, double b) const {
    static constexpr double x[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                    0.8611363115940526};
    static constexpr double w[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                    0.3478548451374538};
    const double m = 0.5 * (a + b), r = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 4; ++i) s += w[i] * speed(m + r * x[i]);
    return s * r;
  }

  std::function<Vec3(double)> c_;
  double panel_[kPanels]{};
  double total_ = 0.0;
};

ArcLength edge_curve(const Geometry& g, int e) {
  const EdgeUse& use = g.edges[e].uses[0];
  const FaceDef& f = g.faces[use.face];
  return ArcLength([&f, use](double sigma) {
    const Vec2 uv = side_point(f, use.side, use.reversed ? 1.0 - sigma : sigma);
    return f.base(uv[0], uv[1]);
  });
}

// Uniform-by-arclength interior samples of a curve, in fixed point.
std::vector<std::int64_t> arclength_samples(const ArcLength& a, double scale, double h) {
  const long m = std::max(1L, std::lround(scale * a.total() / h));
  std::vector<std::int64_t> out;
  for (long i = 1; i < m; ++i) out.push_back(exact::to_fixed(a.invert(a.total() * double(i) / double(m))));
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::int64_t prev = i == 0 ? 0 : out[i - 1];
    if (out[i] <= prev || out[i] >= kMax) throw GeometryError("edge samples collapsed; h too small");
  }
  return out;
}

std::array<std::int64_t, 2> corner_canon(int c) {
  switch (c) {
    case 0: return {0, 0};
    case 1: return {kMax, 0};
    case 2: return {kMax, kMax};
    default: return {0, kMax};
  }
}

std::array<std::int64_t, 2> side_canon(int side, std::int64_t w) {
  switch (side) {
    case kBottom: return {w, 0};
    case kRight: return {kMax, w};
    case kTop: return {w, kMax};
    default: return {0, w};
  }
}

}  // namespace

double edge_base_length(const Geometry& g, int e) { return edge_curve(g, e).total(); }

std::vector<TessTriangle> SurfaceTessellation::triangles() const {
  std::vector<TessTriangle> out;
  for (std::size_t f = 0; f < face_triangles.size(); ++f)
    for (const auto& t : face_triangles[f]) out.push_back({t, int(f)});
  return out;
}

std::size_t SurfaceTessellation::triangle_count() const {
  std::size_t n = 0;
  for (const auto& ft : face_triangles) n += ft.size();
  return n;
}

std::array<std::int64_t, 2> SurfaceTessellation::face_canon(const Geometry& g, int f, int vi) const {
  const TessVertex& v = vertices[vi];
  const FaceDef& fd = g.faces[f];
  switch (v.owner.kind) {
    case EntityKind::Face:
      if (v.owner.index != f) break;
      return {v.k0, v.k1};
    case EntityKind::Edge:
      for (int k = 0; k < 4; ++k)
        if (fd.side_edge[k] == v.owner.index)
          return side_canon(k, fd.side_reversed[k] ? kMax - v.k0 : v.k0);
      break;
    case EntityKind::Node:
      for (int c = 0; c < 4; ++c)
        if (fd.corner_node[c] == v.owner.index) return corner_canon(c);
      break;
  }
  throw GeometryError("vertex does not lie on face " + std::to_string(f));
}

std::vector<int> SurfaceTessellation::face_boundary(const Geometry& g, int f) const {
  const FaceDef& fd = g.faces[f];
  std::vector<int> loop;
  for (int k = 0; k < 4; ++k) {
    std::vector<int> side = edge_polyline[fd.side_edge[k]];
    const bool increasing = (k == kBottom || k == kRight);
    if (increasing == fd.side_reversed[k]) std::reverse(side.begin(), side.end());
    loop.insert(loop.end(), side.begin(), side.end() - 1);
  }
  return loop;
}

SurfaceTessellation tessellate(const Geometry& g, double t, double h) {
  if (!(h > 0)) throw GeometryError("target length h must be positive");
  if (t < g.t0 || t > g.tf) throw GeometryError("time outside the geometry's interval");

  SurfaceTessellation T;
  T.time = t;
  T.h = h;

  for (std::size_t n = 0; n < g.nodes.size(); ++n) {
    T.node_vertex.push_back(int(T.vertices.size()));
    T.vertices.push_back({g.eval_node(int(n), t), {EntityKind::Node, int(n)}, {}, 0, 0, 0});
  }

  std::vector<std::vector<std::int64_t>> edge_s(g.edges.size());
  T.edge_polyline.resize(g.edges.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const EdgeDef& ed = g.edges[e];
    if (ed.mirror_of >= 0) {
      edge_s[e] = edge_s[ed.mirror_of];
    } else {
      const int body = g.faces[ed.uses[0].face].body;
      edge_s[e] = arclength_samples(edge_curve(g, int(e)), g.body_scale(body, t), h);
    }
    auto& poly = T.edge_polyline[e];
    poly.push_back(T.node_vertex[ed.nodes[0]]);
    for (std::size_t i = 0; i < edge_s[e].size(); ++i) {
      const std::int64_t S = edge_s[e][i];
      const double s = lerp(ed.s0, ed.s1, exact::from_fixed(S));
      poly.push_back(int(T.vertices.size()));
      T.vertices.push_back({g.eval_edge(int(e), s, t), {EntityKind::Edge, int(e)}, {s, 0.0}, S, 0, int(i)});
    }
    poly.push_back(T.node_vertex[ed.nodes[1]]);
  }

  std::vector<std::vector<std::array<std::int64_t, 2>>> face_uv(g.faces.size());
  T.face_triangles.resize(g.faces.size());
  for (std::size_t f = 0; f < g.faces.size(); ++f) {
    const FaceDef& fd = g.faces[f];
    auto& grid = face_uv[f];
    if (fd.mirror_of >= 0) {
      for (const auto& uv : face_uv[fd.mirror_of]) grid.push_back({uv[1], uv[0]});
    } else {
      const double scale = g.body_scale(fd.body, t);
      // Samples along one parameter direction: reuse the boundary samples
      // when both opposite sides agree, else resample the middle iso-line.
      auto axis = [&](int lo_side, int hi_side, bool along_u) {
        const auto& a = edge_s[fd.side_edge[lo_side]];
        const auto& b = edge_s[fd.side_edge[hi_side]];
        std::vector<std::int64_t> w;
        if (a.size() == b.size()) {
          for (std::int64_t S : a) w.push_back(fd.side_reversed[lo_side] ? kMax - S : S);
          std::sort(w.begin(), w.end());
          return w;
        }
        const double mid = along_u ? 0.5 * (fd.v0 + fd.v1) : 0.5 * (fd.u0 + fd.u1);
        ArcLength iso([&fd, mid, along_u](double sigma) {
          return along_u ? fd.base(lerp(fd.u0, fd.u1, sigma), mid)
                         : fd.base(mid, lerp(fd.v0, fd.v1, sigma));
        });
        return arclength_samples(iso, scale, h);
      };
      const auto us = axis(kBottom, kTop, true);
      const auto vs = axis(kLeft, kRight, false);
      for (std::int64_t V : vs)
        for (std::int64_t U : us) grid.push_back({U, V});
    }
    const int first = int(T.vertices.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double u = lerp(fd.u0, fd.u1, exact::from_fixed(grid[i][0]));
      const double v = lerp(fd.v0, fd.v1, exact::from_fixed(grid[i][1]));
      T.vertices.push_back({g.eval_face(int(f), u, v, t), {EntityKind::Face, int(f)}, {u, v},
                            grid[i][0], grid[i][1], int(i)});
    }

    PlanarDomain dom;
    for (int vi : T.face_boundary(g, int(f))) {
      const auto c = T.face_canon(g, int(f), vi);
      dom.boundary.push_back({{exact::from_fixed(c[0]), exact::from_fixed(c[1])}, std::uint64_t(vi)});
    }
    for (std::size_t i = 0; i < grid.size(); ++i)
      dom.interior.push_back({{exact::from_fixed(grid[i][0]), exact::from_fixed(grid[i][1])},
                              std::uint64_t(first + int(i))});
    const Triangulation2 tri = triangulate_conforming(dom);
    for (const auto& tr : tri.triangles)
      T.face_triangles[f].push_back({int(tri.points[tr[0]].id), int(tri.points[tr[1]].id),
                                     int(tri.points[tr[2]].id)});
  }
  return T;
}

long euler_characteristic(const SurfaceTessellation& tess, const std::vector<int>& faces) {
  std::set<int> verts;
  std::set<std::pair<int, int>> edges;
  long nf = 0;
  for (int f : faces)
    for (const auto& t : tess.face_triangles[f]) {
      ++nf;
      for (int k = 0; k < 3; ++k) {
        verts.insert(t[k]);
        const int a = t[k], b = t[(k + 1) % 3];
        edges.insert({std::min(a, b), std::max(a, b)});
      }
    }
  return long(verts.size()) - long(edges.size()) + nf;
}

}  // namespace spacetime
