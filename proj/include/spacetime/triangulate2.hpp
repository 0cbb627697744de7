#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "spacetime/vec.hpp"

namespace spacetime {

class TriangulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PlanarPoint {
  Vec2 p;
  std::uint64_t id = 0;
};

/// Rectangle with a fixed counter-clockwise boundary polyline on its
/// perimeter and optional interior points. Ids must be distinct; they also
/// break ties between cocircular points, so equal ids orderings give equal
/// triangulations.
struct PlanarDomain {
  Vec2 lo{0.0, 0.0}, hi{1.0, 1.0};
  std::vector<PlanarPoint> boundary;
  std::vector<PlanarPoint> interior;
};

struct Triangulation2 {
  std::vector<PlanarPoint> points;  // boundary first, then interior, input order
  std::vector<std::array<int, 3>> triangles;
  std::vector<bool> steiner;  // per point
};

/// Conforming triangulation of the domain; every boundary segment is a hull
/// edge. The result is the Delaunay triangulation after snapping to the
/// fixed-point grid, with cocircular ties resolved by id.
Triangulation2 triangulate_conforming(const PlanarDomain& domain);

/// Twice the signed area, summed.
double signed_area2(const Triangulation2& tri);

}  // namespace spacetime
