#pragma once

// Tetrahedralization of a box [0,1]^2 x [0,1] whose bottom, top and side
// walls are already triangulated. Points sit on the fixed-point grid; the
// bottom layer has level 0, the top layer level 2.

#include <array>
#include <stdexcept>
#include <vector>

#include "spacetime/exact.hpp"

namespace spacetime {

class TetrahedralizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LayerBox {
  std::vector<exact::P3> points;  // ranks must be distinct
  std::vector<std::array<int, 3>> bottom, top, walls;
};

enum class LayerStrategy { Local, Cone };

/// Tets over `box.points` plus one extra apex point (index points.size())
/// at the box center, level 1. All tets are positively oriented.
///
/// Local: regular triangulation of both layers lifted by x^2 + y^2 (it
/// restricts to the given Delaunay bottom/top/walls), then the apex is
/// inserted by re-coning its star. Cone: every boundary triangle joined
/// to the apex.
std::vector<std::array<int, 4>> tetrahedralize_layers(const LayerBox& box, LayerStrategy strategy);

/// Boundary closedness, face pairing, orientation and volume audit; throws.
void verify_layer_tets(const LayerBox& box, const std::vector<std::array<int, 4>>& tets);

}  // namespace spacetime
