#pragma once

// Exact predicates on fixed-point coordinates.
//
// Points live on a 2^-50 grid of the unit square (plus a small integer level
// coordinate for layered 3D configurations). Lifted tests use w = x^2 + y^2
// perturbed symbolically by rank, so every in-circle / lower-hull test is
// decided and two calls that see the same ranks agree.

#include <cstdint>

namespace spacetime::exact {

inline constexpr int kFixedBits = 50;
inline constexpr std::int64_t kFixedOne = std::int64_t{1} << kFixedBits;

struct P2 {
  std::int64_t x = 0, y = 0;
  std::uint64_t rank = 0;
};

/// `l` is a level coordinate, |l| <= 2.
struct P3 {
  std::int64_t x = 0, y = 0, l = 0;
  std::uint64_t rank = 0;
};

/// Round a coordinate in [0, 1] to the fixed grid.
std::int64_t to_fixed(double unit);
double from_fixed(std::int64_t v);

/// Sign of det[b-a, c-a].
int orient2d(const P2& a, const P2& b, const P2& c);

/// Sign of det[b-a, c-a, d-a] over (x, y, l).
int orient3d(const P3& a, const P3& b, const P3& c, const P3& d);

/// Sign of lift(d) minus the affine interpolant of the lift over triangle abc.
/// Negative means d is strictly inside the (perturbed) circumcircle.
/// abc must not be collinear; never returns 0 for distinct ranks.
int lifted_side2(const P2& a, const P2& b, const P2& c, const P2& d);

/// Same test one dimension up: is y below the lifted hyperplane of tet abcd?
/// The lift ignores the level coordinate. abcd must not be flat.
int lifted_side3(const P3& a, const P3& b, const P3& c, const P3& d, const P3& y);

}  // namespace spacetime::exact
