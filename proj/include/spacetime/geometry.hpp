#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spacetime/vec.hpp"

namespace spacetime {

enum class EntityKind : std::uint8_t { Node, Edge, Face };

struct EntityId {
  EntityKind kind = EntityKind::Node;
  int index = 0;
  auto operator<=>(const EntityId&) const = default;
};

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Time-dependent similarity transform. Endpoint values are reproduced
/// exactly at t0 and tf.
struct Motion {
  enum class Kind { Static, LinearScale, Rotation, Translation };

  Kind kind = Kind::Static;
  Vec3 center{};
  Vec3 axis{0.0, 0.0, 1.0};
  double a0 = 1.0, a1 = 1.0;  // scale factors or angles (radians)
  Vec3 v0{}, v1{};
  double t0 = 0.0, tf = 1.0;

  static Motion stationary();
  static Motion linear_scale(const Vec3& center, double f0, double f1, double t0, double tf);
  static Motion rotation(const Vec3& axis, const Vec3& center, double angle0, double angle1,
                         double t0, double tf);
  static Motion translation(const Vec3& v0, const Vec3& v1, double t0, double tf);

  double tau(double t) const;
  Vec3 apply(const Vec3& p, double t) const;
  /// Length ratio of the transform at t.
  double scale(double t) const;
};

enum Side : int { kBottom = 0, kRight = 1, kTop = 2, kLeft = 3 };

/// One incidence of an Edge on a Face side. The side is traversed with the
/// side coordinate increasing; `reversed` flips the Edge direction.
struct EdgeUse {
  int face = -1;
  int side = 0;
  bool reversed = false;
};

struct FaceDef {
  double u0 = 0, u1 = 1, v0 = 0, v1 = 1;
  std::function<Vec3(double, double)> base;  // shape before motion
  int body = 0;
  std::array<int, 4> side_edge{};      // bottom, right, top, left
  std::array<bool, 4> side_reversed{};
  std::array<int, 4> corner_node{};    // (u0,v0) (u1,v0) (u1,v1) (u0,v1)
  int mirror_of = -1;                  // tessellation copied from this face
};

struct EdgeDef {
  double s0 = 0, s1 = 1;
  std::array<int, 2> nodes{};  // at s0, s1
  std::array<EdgeUse, 2> uses{};
  int nuses = 0;
  int mirror_of = -1;
};

struct NodeDef {
  int edge = -1;
  int end = 0;
  int mirror_of = -1;
};

struct Body {
  std::string name;
  std::vector<Motion> motions;
  std::vector<int> faces;
};

/// Multi-patch body with rectangular Face domains and exact evaluators.
class Geometry {
 public:
  std::vector<NodeDef> nodes;
  std::vector<EdgeDef> edges;
  std::vector<FaceDef> faces;
  std::vector<Body> bodies;
  double t0 = 0.0, tf = 1.0;
  double diameter = 1.0;
  bool prismatic = false;  // sphere scaling about the box center

  Vec3 eval_face(int f, double u, double v, double t) const;
  Vec3 eval_face_base(int f, double u, double v) const;
  Vec3 eval_edge(int e, double s, double t) const;
  Vec3 eval_edge_base(int e, double s) const;
  Vec3 eval_node(int n, double t) const;

  /// Face parameters of Edge parameter s.
  Vec2 edge_uv(int e, int f, double s) const;
  const EdgeUse& use_of(int e, int f) const;

  double body_scale(int body, double t) const;
  Vec3 apply_motion(int body, const Vec3& p, double t) const;

  /// Closed loop (edge, agrees-with-ccw) in bottom, right, top, left order.
  std::vector<std::pair<int, bool>> face_loop(int f) const;
  std::array<int, 2> edge_faces(int e) const;

  /// Structural checks: two uses per Edge, closed loops, matching corners.
  void validate() const;
};

/// Corner of `side` at normalized side coordinate 0 / 1.
std::array<int, 2> side_corners(int side);
/// (u, v) on the boundary of face f at normalized side coordinate w.
Vec2 side_point(const FaceDef& f, int side, double w);

Geometry make_sphere_in_box(double r0, double rf, double l, double t0 = 0.0, double tf = 1.0);
Geometry make_torus_in_box(double r0, double R0, double rf, double Rf, double l, double t0 = 0.0,
                           double tf = 1.0);
/// Static box alone; its faces point inward.
Geometry make_box(double l, double t0 = 0.0, double tf = 1.0);

}  // namespace spacetime
