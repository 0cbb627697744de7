#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "spacetime/geometry.hpp"
#include "spacetime/layer_tet.hpp"
#include "spacetime/mesh4.hpp"
#include "spacetime/tessellator.hpp"

namespace spacetime {

class CapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CapMode { Closed, Open };

struct BuildOptions {
  int slabs = 10;
  double h = 0.02;
  CapMode caps = CapMode::Closed;
  LayerStrategy strategy = LayerStrategy::Local;
};

/// Two consecutive tessellations with their global vertex offsets.
struct Slab {
  int k = 0;
  double t_lo = 0.0, t_hi = 1.0;
  const SurfaceTessellation* bottom = nullptr;
  const SurfaceTessellation* top = nullptr;
  int bottom_offset = 0, top_offset = 0;
};

struct SteinerVertex4 {
  EntityId owner;
  Vec2 params{};
  double w = 0.5;
  Vec4 coords{};
};

struct BuildTimings {
  double tessellation = 0.0;
  double edge_triangulation = 0.0;
  double face_tetrahedralization = 0.0;
  double caps = 0.0;
};

struct SteinerRecord {
  int vertex = 0;
  int slab = 0;
  SteinerVertex4 steiner;
  double t_lo = 0.0, t_hi = 0.0;
};

struct BuildResult {
  SpacetimeMesh mesh;
  std::vector<SurfaceTessellation> tessellations;
  std::vector<int> offsets;  // global id of vertex 0 of each tessellation
  std::vector<SteinerRecord> steiner;
  BuildTimings timings;
};

/// ((1-w) eval(t_lo) + w eval(t_hi), (1-w) t_lo + w t_hi) for a Face point.
Vec4 steiner_coords(const Geometry& g, int face, const Vec2& uv, double t_lo, double t_hi, double w);

std::array<int, 2> connect_node(int node, const Slab& slab);

/// (s, t) wall of an Edge; global ids, counter-clockwise in (s, t).
std::vector<std::array<int, 3>> connect_edge(const Geometry& g, int edge, const Slab& slab);

struct FaceSlab {
  std::vector<std::array<int, 4>> tets;  // global ids; apex_id for the Steiner vertex
  SteinerVertex4 apex;
};

/// (u, v, t) box of a Face. `walls` holds connect_edge output per Edge for
/// this slab. Tets are positively oriented in (u, v, t).
FaceSlab connect_face(const Geometry& g, int face, const Slab& slab,
                      const std::vector<std::vector<std::array<int, 3>>>& walls, int apex_id,
                      LayerStrategy strategy);

/// Radial-prism cap between the sphere and the box at the tessellation's
/// time. Global ids offset by `offset`; `final` picks the orientation.
std::vector<std::array<int, 4>> build_caps(const Geometry& g, const SurfaceTessellation& tess,
                                           int offset, bool final);

BuildResult build_spacetime_mesh(const Geometry& g, const BuildOptions& opt);

}  // namespace spacetime
