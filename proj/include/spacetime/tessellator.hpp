#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "spacetime/geometry.hpp"

namespace spacetime {

struct TessVertex {
  Vec3 x;
  EntityId owner;
  Vec2 params{};  // s in params[0] for Edges, (u, v) for Faces, unused for Nodes
  // Fixed-point normalized parameters: S for Edges, (U, V) for Faces.
  std::int64_t k0 = 0, k1 = 0;
  int sample = 0;  // index among the owner's samples
};

struct TessTriangle {
  std::array<int, 3> v;
  int face;
};

/// Watertight triangulation of every Face of a Geometry at one time.
/// Vertex order: Nodes, Edge interiors by Edge id, Face interiors by Face id.
struct SurfaceTessellation {
  double time = 0.0;
  double h = 0.0;
  std::vector<TessVertex> vertices;
  std::vector<int> node_vertex;                              // per Node
  std::vector<std::vector<int>> edge_polyline;               // per Edge, s increasing
  std::vector<std::vector<std::array<int, 3>>> face_triangles;  // per Face, outward

  std::vector<TessTriangle> triangles() const;
  std::size_t triangle_count() const;

  /// Normalized fixed-point (U, V) of vertex `vi` seen from face f.
  std::array<std::int64_t, 2> face_canon(const Geometry& g, int f, int vi) const;
  /// Counter-clockwise boundary loop of face f (corner 0 first).
  std::vector<int> face_boundary(const Geometry& g, int f) const;
};

/// Arclength of the base (unmoved) shape of an Edge.
double edge_base_length(const Geometry& g, int e);

SurfaceTessellation tessellate(const Geometry& g, double t, double h);

/// V - E + F over the triangles of the given Faces.
long euler_characteristic(const SurfaceTessellation& tess, const std::vector<int>& faces);

}  // namespace spacetime
