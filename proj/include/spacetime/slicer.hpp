#pragma once

#include <array>
#include <optional>
#include <vector>

#include "spacetime/mesh4.hpp"
#include "spacetime/vec.hpp"

namespace spacetime {

/// {p : dot(p - c, n) = 0}.
struct Hyperplane {
  Vec4 n{0, 0, 0, 1};
  Vec4 c{};

  static Hyperplane time_slice(double t) { return {{0, 0, 0, 1}, {0, 0, 0, t}}; }

  double distance(const Vec4& p) const { return dot(p - c, n); }
  /// Orthonormal basis of the plane: Gram-Schmidt over the coordinate axes
  /// except the one where |n_i| is largest.
  std::array<Vec4, 3> basis() const;
  Vec3 project(const Vec4& p) const;
};

enum class SliceShape : int { None = 0, Triangle = 1, Quad = 2 };

/// Lookup tables for tet/plane intersection, indexed by the 4-bit code r.
/// Quad rows are ordered so (e0, e1, e2) and (e1, e3, e2) tile the quad;
/// triangle rows repeat e2 in the last slot; empty rows are all -1.
struct SliceTables {
  std::array<std::array<int, 4>, 16> case_edges{};
  std::array<std::array<int, 2>, 6> edge_endpoints{};
  std::array<SliceShape, 16> shape_of_case{};
  std::array<int, 18> v2e{};
};

/// Enumerates the 16 sign patterns through the clipping oracle, then checks
/// the table invariants (throws std::logic_error on violation).
SliceTables derive_tables();
const SliceTables& slice_tables();
void validate_tables(const SliceTables& t);

/// Vertex side bits: 1 iff dot(p - c, n) <= 0.
int case_code(const std::array<double, 4>& d);

struct SlicePrimitive {
  SliceShape shape = SliceShape::None;
  int code = 0;
  std::vector<Vec4> points4;  // slot order e0, e1, e2[, e3]
  std::vector<Vec3> points;   // projected
};

std::optional<SlicePrimitive> slice_tet(const std::array<Vec4, 4>& p, const Hyperplane& H,
                                        const SliceTables& tables = slice_tables());

struct SliceSegment {
  std::array<Vec3, 2> p;
  int tag = 0;
};

std::optional<SliceSegment> slice_triangle(const std::array<Vec4, 3>& p, const Hyperplane& H);

/// Brute-force intersection polygon, ordered by walking the tet faces.
/// Each point is tagged with the tet edge it lies on (or -1 - vertex for an
/// on-plane vertex).
struct OraclePoint {
  Vec4 p;
  int edge;
};
std::vector<OraclePoint> clip_oracle(const std::array<Vec4, 4>& p, const Hyperplane& H);

/// Cyclic order of the crossed edges for a side-bit pattern.
std::vector<int> oracle_edge_cycle(int code);

struct SliceTriangle {
  std::array<Vec3, 3> p;
  std::array<Vec3, 3> altitude;  // solid-wireframe distances per vertex
  int tag = 0;
  int code = 0;
};

struct SliceResult {
  std::vector<SliceTriangle> triangles;
  std::vector<SliceSegment> segments;
  std::array<std::size_t, 16> case_count{};  // non-degenerate primitives per code
  std::size_t tets_tested = 0;
};

inline constexpr double kDiagonalAltitude = 1e4;
inline constexpr double kMinSliceArea = 1e-20;

/// Slices tets (pentatopes expanded to their boundary tets) and Edge
/// triangles. Degenerate triangles (area < kMinSliceArea) are dropped.
SliceResult slice_mesh(const SpacetimeMesh& mesh, const Hyperplane& H);

/// 3-volume of the convex cross-section of one pentatope: facet polygons
/// coned to the mean of their points.
double pentatope_slice_volume(const std::array<Vec4, 5>& p, const Hyperplane& H);
/// Sum of pentatope_slice_volume over all pentatopes (compensated).
double slice_volume(const SpacetimeMesh& mesh, const Hyperplane& H);

}  // namespace spacetime
