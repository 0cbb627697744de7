#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "spacetime/cases.hpp"
#include "spacetime/vec.hpp"

namespace spacetime {

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <std::size_t N>
struct Cell {
  std::array<int, N> v{};
  int ref = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

using Tet = Cell<4>;
using Tri = Cell<3>;
using Seg = Cell<2>;
using Pentatope = Cell<5>;

/// 4D simplicial complex. `vertex_ref` is 1 for Steiner vertices.
struct SpacetimeMesh {
  std::vector<Vec4> vertices;
  std::vector<int> vertex_ref;
  std::vector<Tet> tets;
  std::vector<Tri> triangles;
  std::vector<Seg> segments;
  std::vector<Pentatope> pentatopes;

  int add_vertex(const Vec4& p, int ref = 0);
  std::size_t steiner_count() const;
  /// Index range and repeated-vertex checks; throws MeshError.
  void validate() const;
  std::array<Vec4, 2> bounding_box() const;

  friend bool operator==(const SpacetimeMesh&, const SpacetimeMesh&) = default;
};

struct ManifoldMode {
  bool closed = true;
  double t0 = 0.0, tf = 1.0;  // with-boundary: faces flat at t0 or tf may be unshared

  static ManifoldMode closed_mode() { return {}; }
  static ManifoldMode with_boundary(double t0, double tf) { return {false, t0, tf}; }
};

struct ManifoldReport {
  bool pass = false;
  std::size_t faces = 0;
  std::size_t boundary_faces = 0;  // shared once, allowed by the mode
  std::size_t bad_count = 0;       // wrong incidence count
  std::size_t bad_orientation = 0;
  std::vector<std::array<int, 3>> offending;  // first few
};

/// Face incidence and orientation audit of the tets.
ManifoldReport check_manifold(const SpacetimeMesh& mesh, const ManifoldMode& mode);

/// sqrt(det(G^T G)) / 6 with G the 4x3 edge matrix.
double tet_measure3(const Vec4& p0, const Vec4& p1, const Vec4& p2, const Vec4& p3);
/// Signed 4-volume of a pentatope.
double pentatope_measure4(const std::array<Vec4, 5>& p);

/// Kahan-compensated accumulator.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0, c_ = 0.0;
};

struct VolumeReport {
  double total = 0.0;
  std::map<int, double> per_tag;
  double expected = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
};

VolumeReport measure_volume(const SpacetimeMesh& mesh);
VolumeReport measure_volume(const SpacetimeMesh& mesh, double expected);

double v_hypercone_sphere(double r, double h);
double v_hypercone_torus(double r, double R, double h);
/// Analytic 3-volume of the traced boundary; caps included when closed.
double expected_volume(const CaseSpec& c, bool closed);

/// (n+1)^4 grid over [0,1]^4 with 24 n^4 positively oriented path simplices.
SpacetimeMesh kuhn_pentatopes(int n);

/// The 5 facets, each oriented as part of the boundary of the pentatope.
std::array<std::array<int, 4>, 5> pentatope_boundary_tets(const std::array<int, 5>& p);

/// Boundary tets of every pentatope with shared facets kept once.
std::vector<Tet> expand_pentatopes(const SpacetimeMesh& mesh);

}  // namespace spacetime
