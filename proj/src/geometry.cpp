#include "spacetime/geometry.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace spacetime {

// ---------------------------------------------------------------- Motion

Motion Motion::stationary() { return Motion{}; }

Motion Motion::linear_scale(const Vec3& center, double f0, double f1, double t0, double tf) {
  Motion m;
  m.kind = Kind::LinearScale;
  m.center = center;
  m.a0 = f0;
  m.a1 = f1;
  m.t0 = t0;
  m.tf = tf;
  return m;
}

Motion Motion::rotation(const Vec3& axis, const Vec3& center, double angle0, double angle1,
                        double t0, double tf) {
  const double n = norm(axis);
  if (!(n > 0)) throw GeometryError("rotation axis must be nonzero");
  Motion m;
  m.kind = Kind::Rotation;
  m.axis = axis * (1.0 / n);
  m.center = center;
  m.a0 = angle0;
  m.a1 = angle1;
  m.t0 = t0;
  m.tf = tf;
  return m;
}

Motion Motion::translation(const Vec3& v0, const Vec3& v1, double t0, double tf) {
  Motion m;
  m.kind = Kind::Translation;
  m.v0 = v0;
  m.v1 = v1;
  m.t0 = t0;
  m.tf = tf;
  return m;
}

double Motion::tau(double t) const { return (t - t0) / (tf - t0); }

Vec3 Motion::apply(const Vec3& p, double t) const {
  switch (kind) {
    case Kind::Static:
      return p;
    case Kind::LinearScale: {
      const double f = a0 == a1 ? a0 : lerp(a0, a1, tau(t));
      if (center == Vec3{}) return f * p;
      return center + f * (p - center);
    }
    case Kind::Rotation: {
      const double th = lerp(a0, a1, tau(t));
      const Vec3 d = p - center;
      const double c = std::cos(th), s = std::sin(th);
      // Rodrigues
      const Vec3 r = c * d + s * cross(axis, d) + ((1.0 - c) * dot(axis, d)) * axis;
      return center + r;
    }
    case Kind::Translation:
      return p + lerp(v0, v1, tau(t));
  }
  return p;
}

double Motion::scale(double t) const {
  if (kind != Kind::LinearScale) return 1.0;
  return std::abs(a0 == a1 ? a0 : lerp(a0, a1, tau(t)));
}

// -------------------------------------------------------------- Geometry

std::array<int, 2> side_corners(int side) {
  switch (side) {
    case kBottom: return {0, 1};
    case kRight: return {1, 2};
    case kTop: return {3, 2};
    default: return {0, 3};
  }
}

Vec2 side_point(const FaceDef& f, int side, double w) {
  switch (side) {
    case kBottom: return {lerp(f.u0, f.u1, w), f.v0};
    case kRight: return {f.u1, lerp(f.v0, f.v1, w)};
    case kTop: return {lerp(f.u0, f.u1, w), f.v1};
    default: return {f.u0, lerp(f.v0, f.v1, w)};
  }
}

Vec3 Geometry::apply_motion(int body, const Vec3& p, double t) const {
  Vec3 q = p;
  for (const Motion& m : bodies[body].motions) q = m.apply(q, t);
  return q;
}

double Geometry::body_scale(int body, double t) const {
  double s = 1.0;
  for (const Motion& m : bodies[body].motions) s *= m.scale(t);
  return s;
}

Vec3 Geometry::eval_face_base(int f, double u, double v) const { return faces[f].base(u, v); }

Vec3 Geometry::eval_face(int f, double u, double v, double t) const {
  return apply_motion(faces[f].body, faces[f].base(u, v), t);
}

const EdgeUse& Geometry::use_of(int e, int f) const {
  const EdgeDef& ed = edges.at(e);
  for (int i = 0; i < ed.nuses; ++i)
    if (ed.uses[i].face == f) return ed.uses[i];
  throw GeometryError("edge " + std::to_string(e) + " is not incident to face " +
                      std::to_string(f));
}

Vec2 Geometry::edge_uv(int e, int f, double s) const {
  const EdgeUse& use = use_of(e, f);
  const EdgeDef& ed = edges[e];
  if (s < std::min(ed.s0, ed.s1) || s > std::max(ed.s0, ed.s1))
    throw GeometryError("edge parameter out of range");
  const double sigma = (s - ed.s0) / (ed.s1 - ed.s0);
  return side_point(faces[f], use.side, use.reversed ? 1.0 - sigma : sigma);
}

Vec3 Geometry::eval_edge_base(int e, double s) const {
  const int f = edges[e].uses[0].face;
  const Vec2 uv = edge_uv(e, f, s);
  return eval_face_base(f, uv[0], uv[1]);
}

Vec3 Geometry::eval_edge(int e, double s, double t) const {
  const int f = edges[e].uses[0].face;
  const Vec2 uv = edge_uv(e, f, s);
  return eval_face(f, uv[0], uv[1], t);
}

Vec3 Geometry::eval_node(int n, double t) const {
  const NodeDef& nd = nodes[n];
  const EdgeDef& ed = edges[nd.edge];
  return eval_edge(nd.edge, nd.end == 0 ? ed.s0 : ed.s1, t);
}

std::vector<std::pair<int, bool>> Geometry::face_loop(int f) const {
  const FaceDef& fd = faces[f];
  std::vector<std::pair<int, bool>> loop;
  for (int k = 0; k < 4; ++k) {
    const bool increasing_is_ccw = (k == kBottom || k == kRight);
    loop.emplace_back(fd.side_edge[k], increasing_is_ccw != fd.side_reversed[k]);
  }
  return loop;
}

std::array<int, 2> Geometry::edge_faces(int e) const {
  return {edges[e].uses[0].face, edges[e].uses[1].face};
}

void Geometry::validate() const {
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const EdgeDef& ed = edges[e];
    if (ed.nuses != 2)
      throw GeometryError("edge " + std::to_string(e) + " must bound exactly two faces");
    if (ed.nodes[0] == ed.nodes[1]) throw GeometryError("degenerate edge");
    for (int i = 0; i < 2; ++i) {
      const EdgeUse& u = ed.uses[i];
      const FaceDef& fd = faces[u.face];
      const auto sc = side_corners(u.side);
      const int at0 = fd.corner_node[sc[u.reversed ? 1 : 0]];
      const int at1 = fd.corner_node[sc[u.reversed ? 0 : 1]];
      if (at0 != ed.nodes[0] || at1 != ed.nodes[1] || fd.side_edge[u.side] != int(e))
        throw GeometryError("edge/face incidence mismatch on edge " + std::to_string(e));
    }
  }
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const FaceDef& fd = faces[f];
    if (!(fd.u1 > fd.u0) || !(fd.v1 > fd.v0)) throw GeometryError("empty face domain");
    // consecutive sides share a corner
    const auto loop = face_loop(int(f));
    for (int k = 0; k < 4; ++k) {
      const auto [e0, fw0] = loop[k];
      const auto [e1, fw1] = loop[(k + 1) % 4];
      const int end0 = edges[e0].nodes[fw0 ? 1 : 0];
      const int start1 = edges[e1].nodes[fw1 ? 0 : 1];
      if (end0 != start1) throw GeometryError("open face loop on face " + std::to_string(f));
    }
  }
  for (const NodeDef& n : nodes)
    if (n.edge < 0) throw GeometryError("isolated node");
}

// ------------------------------------------------------------ builders

namespace {

struct FaceSpec {
  double u0, u1, v0, v1;
  std::function<Vec3(double, double)> base;
  std::array<std::uint64_t, 4> side_key;
  std::array<std::uint64_t, 4> corner_key;
};

void add_shell(Geometry& g, int body, const std::vector<FaceSpec>& specs) {
  std::map<std::uint64_t, int> node_of, edge_of;
  for (const FaceSpec& sp : specs) {
    const int f = int(g.faces.size());
    FaceDef fd;
    fd.u0 = sp.u0;
    fd.u1 = sp.u1;
    fd.v0 = sp.v0;
    fd.v1 = sp.v1;
    fd.base = sp.base;
    fd.body = body;
    for (int c = 0; c < 4; ++c) {
      auto [it, fresh] = node_of.emplace(sp.corner_key[c], int(g.nodes.size()));
      if (fresh) g.nodes.push_back(NodeDef{});
      fd.corner_node[c] = it->second;
    }
    for (int k = 0; k < 4; ++k) {
      const auto sc = side_corners(k);
      const int a = fd.corner_node[sc[0]], b = fd.corner_node[sc[1]];
      auto it = edge_of.find(sp.side_key[k]);
      if (it == edge_of.end()) {
        EdgeDef ed;
        const bool along_u = (k == kBottom || k == kTop);
        ed.s0 = along_u ? sp.u0 : sp.v0;
        ed.s1 = along_u ? sp.u1 : sp.v1;
        ed.nodes = {a, b};
        ed.uses[0] = {f, k, false};
        ed.nuses = 1;
        edge_of.emplace(sp.side_key[k], int(g.edges.size()));
        fd.side_edge[k] = int(g.edges.size());
        fd.side_reversed[k] = false;
        g.edges.push_back(ed);
      } else {
        EdgeDef& ed = g.edges[it->second];
        if (ed.nuses >= 2) throw GeometryError("edge used by more than two faces");
        const bool rev = (a != ed.nodes[0]);
        if ((rev ? b : a) != ed.nodes[0] || (rev ? a : b) != ed.nodes[1])
          throw GeometryError("inconsistent edge endpoints");
        ed.uses[ed.nuses++] = {f, k, rev};
        fd.side_edge[k] = it->second;
        fd.side_reversed[k] = rev;
      }
    }
    g.faces.push_back(std::move(fd));
    g.bodies[body].faces.push_back(f);
  }
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    for (int j = 0; j < 2; ++j) {
      NodeDef& n = g.nodes[g.edges[e].nodes[j]];
      if (n.edge < 0) {
        n.edge = int(e);
        n.end = j;
      }
    }
}

// Cube face frames: outward axis n and (e1, e2) with e1 x e2 = n.
struct Frame {
  Vec3 n, e1, e2;
};

const std::array<Frame, 6>& cube_frames() {
  static const std::array<Frame, 6> frames{{
      {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},    // +x
      {{-1, 0, 0}, {0, 0, 1}, {0, 1, 0}},   // -x
      {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}},    // +y
      {{0, -1, 0}, {1, 0, 0}, {0, 0, 1}},   // -y
      {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}},    // +z
      {{0, 0, -1}, {0, 1, 0}, {1, 0, 0}},   // -z
  }};
  return frames;
}

Vec3 cube_point(const Frame& fr, double u, double v) { return fr.n + u * fr.e1 + v * fr.e2; }

std::uint64_t corner_key(const Vec3& c) {
  std::uint64_t k = 0;
  for (int i = 0; i < 3; ++i) k = k * 3 + std::uint64_t(std::lround(c[i]) + 1);
  return k;
}

// Cube-sphere shell of unit radius about the origin.
std::vector<FaceSpec> cube_sphere_specs() {
  std::vector<FaceSpec> specs;
  for (const Frame& fr : cube_frames()) {
    FaceSpec sp;
    sp.u0 = -1;
    sp.u1 = 1;
    sp.v0 = -1;
    sp.v1 = 1;
    sp.base = [fr](double u, double v) {
      const Vec3 c = cube_point(fr, u, v);
      return c * (1.0 / norm(c));
    };
    const std::array<Vec2, 4> corners{{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}};
    for (int c = 0; c < 4; ++c) sp.corner_key[c] = corner_key(cube_point(fr, corners[c][0], corners[c][1]));
    for (int k = 0; k < 4; ++k) {
      const auto sc = side_corners(k);
      const auto a = sp.corner_key[sc[0]], b = sp.corner_key[sc[1]];
      sp.side_key[k] = std::min(a, b) * 64 + std::max(a, b);
    }
    specs.push_back(std::move(sp));
  }
  return specs;
}

// Box of side l as the radial image of the cube-sphere shell `src` (faces
// [f0, f0+6) etc. of `shell`). Parameters are swapped so the normals point
// into the box. With `link`, entities record what they mirror.
void append_box_mirror(Geometry& g, const Geometry& shell, double l, bool link) {
  const int body = int(g.bodies.size());
  g.bodies.push_back(Body{"box", {}, {}});
  const int nf = int(g.faces.size()), ne = int(g.edges.size()), nn = int(g.nodes.size());
  static constexpr std::array<int, 4> kSideMap{kLeft, kTop, kRight, kBottom};
  static constexpr std::array<int, 4> kCornerMap{0, 3, 2, 1};  // box corner c <- shell corner

  for (std::size_t i = 0; i < shell.nodes.size(); ++i) {
    NodeDef nd = shell.nodes[i];
    nd.edge += ne;
    nd.mirror_of = link ? int(i) : -1;
    g.nodes.push_back(nd);
  }
  for (std::size_t i = 0; i < shell.edges.size(); ++i) {
    EdgeDef ed = shell.edges[i];
    ed.s0 = 0.0;
    ed.s1 = l;
    for (int j = 0; j < 2; ++j) ed.nodes[j] += nn;
    for (int j = 0; j < ed.nuses; ++j) {
      ed.uses[j].face += nf;
      ed.uses[j].side = kSideMap[ed.uses[j].side];
    }
    ed.mirror_of = link ? int(i) : -1;
    g.edges.push_back(ed);
  }
  for (std::size_t i = 0; i < shell.faces.size(); ++i) {
    const FaceDef& sf = shell.faces[i];
    FaceDef fd;
    fd.u0 = 0.0;
    fd.u1 = l;
    fd.v0 = 0.0;
    fd.v1 = l;
    const Frame fr = cube_frames()[i];
    fd.base = [fr, l](double ub, double vb) {
      return cube_point(fr, 2.0 * vb / l - 1.0, 2.0 * ub / l - 1.0) * (0.5 * l);
    };
    fd.body = body;
    for (int k = 0; k < 4; ++k) {
      fd.side_edge[kSideMap[k]] = sf.side_edge[k] + ne;
      fd.side_reversed[kSideMap[k]] = sf.side_reversed[k];
    }
    for (int c = 0; c < 4; ++c) fd.corner_node[c] = sf.corner_node[kCornerMap[c]] + nn;
    fd.mirror_of = link ? int(i) : -1;
    g.faces.push_back(std::move(fd));
    g.bodies[body].faces.push_back(nf + int(i));
  }
}

Geometry cube_shell_template() {
  Geometry g;
  g.bodies.push_back(Body{"template", {}, {}});
  add_shell(g, 0, cube_sphere_specs());
  return g;
}

void check_time(double t0, double tf) {
  if (!(tf > t0)) throw GeometryError("time interval must satisfy t0 < tf");
}

}  // namespace

Geometry make_sphere_in_box(double r0, double rf, double l, double t0, double tf) {
  check_time(t0, tf);
  if (!(r0 > 0 && r0 <= rf && rf < 0.5 * l))
    throw GeometryError("sphere-in-box requires 0 < r0 <= rf < l/2");
  Geometry g;
  g.t0 = t0;
  g.tf = tf;
  g.bodies.push_back(Body{"sphere", {Motion::linear_scale({}, r0, rf, t0, tf)}, {}});
  add_shell(g, 0, cube_sphere_specs());
  const Geometry shell = g;
  append_box_mirror(g, shell, l, true);
  g.diameter = l * std::sqrt(3.0);
  g.prismatic = true;
  g.validate();
  return g;
}

Geometry make_torus_in_box(double r0, double R0, double rf, double Rf, double l, double t0,
                           double tf) {
  check_time(t0, tf);
  if (!(r0 > 0 && r0 < R0)) throw GeometryError("torus requires 0 < r0 < R0");
  if (!(R0 + r0 <= 0.5 * l)) throw GeometryError("torus requires R0 + r0 <= l/2");
  if (!(rf > 0 && Rf > 0) || std::abs(rf / r0 - Rf / R0) > 1e-12 * (Rf / R0))
    throw GeometryError("torus scaling must be uniform: rf/r0 = Rf/R0");
  Geometry g;
  g.t0 = t0;
  g.tf = tf;
  g.bodies.push_back(Body{"torus", {Motion::linear_scale({}, 1.0, Rf / R0, t0, tf)}, {}});
  const double pi = std::numbers::pi;
  std::vector<FaceSpec> specs;
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i) {
      FaceSpec sp;
      sp.u0 = i * pi;
      sp.u1 = (i + 1) * pi;
      sp.v0 = j * pi;
      sp.v1 = (j + 1) * pi;
      sp.base = [R0, r0](double u, double v) {
        const double w = R0 + r0 * std::cos(v);
        return Vec3{w * std::cos(u), w * std::sin(u), r0 * std::sin(v)};
      };
      auto node = [](int a, int b) { return std::uint64_t((a % 2) * 2 + (b % 2)); };
      sp.corner_key = {node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)};
      // edges: v-lines keyed by (v index, u half), u-lines by (u index, v half)
      auto vline = [](int vi, int uh) { return std::uint64_t(100 + (vi % 2) * 2 + uh); };
      auto uline = [](int ui, int vh) { return std::uint64_t(200 + (ui % 2) * 2 + vh); };
      sp.side_key = {vline(j, i), uline(i + 1, j), vline(j + 1, i), uline(i, j)};
      specs.push_back(std::move(sp));
    }
  add_shell(g, 0, specs);
  append_box_mirror(g, cube_shell_template(), l, false);
  g.diameter = l * std::sqrt(3.0);
  g.validate();
  return g;
}

Geometry make_box(double l, double t0, double tf) {
  check_time(t0, tf);
  if (!(l > 0)) throw GeometryError("box side must be positive");
  Geometry g;
  g.t0 = t0;
  g.tf = tf;
  append_box_mirror(g, cube_shell_template(), l, false);
  g.diameter = l * std::sqrt(3.0);
  g.validate();
  return g;
}

}  // namespace spacetime
