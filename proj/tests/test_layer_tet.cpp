#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "spacetime/layer_tet.hpp"
#include "spacetime/triangulate2.hpp"

using namespace spacetime;

namespace {

struct Layer {
  std::vector<Vec2> pts;  // boundary ccw from (0,0), then interior
  std::array<std::vector<int>, 4> side;  // per side, ccw, both corners included
  int nb = 0;
};

Layer make_layer(std::array<int, 4> per_side, int interior, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.02, 0.98);
  Layer L;
  const std::array<Vec2, 4> c{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < per_side[k]; ++i) {
      L.side[k].push_back(int(L.pts.size()));
      L.pts.push_back(lerp(c[k], c[(k + 1) % 4], double(i) / per_side[k]));
    }
  L.nb = int(L.pts.size());
  for (int k = 0; k < 4; ++k) L.side[k].push_back(L.side[(k + 1) % 4].front());
  for (int i = 0; i < interior; ++i) L.pts.push_back({U(rng), U(rng)});
  return L;
}

std::vector<std::array<int, 3>> triangulate_layer(const Layer& L, int offset) {
  PlanarDomain d;
  for (int i = 0; i < int(L.pts.size()); ++i)
    (i < L.nb ? d.boundary : d.interior).push_back({L.pts[i], std::uint64_t(offset + i)});
  const Triangulation2 t = triangulate_conforming(d);
  std::vector<std::array<int, 3>> out;
  for (const auto& tr : t.triangles)
    out.push_back({int(t.points[tr[0]].id), int(t.points[tr[1]].id), int(t.points[tr[2]].id)});
  return out;
}

LayerBox make_box(std::array<int, 4> bottom, std::array<int, 4> top, int nin_b, int nin_t, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Layer B = make_layer(bottom, nin_b, rng), T = make_layer(top, nin_t, rng);
  const int off = int(B.pts.size());
  LayerBox box;
  for (const Vec2& p : B.pts)
    box.points.push_back({exact::to_fixed(p[0]), exact::to_fixed(p[1]), 0, box.points.size()});
  for (const Vec2& p : T.pts)
    box.points.push_back({exact::to_fixed(p[0]), exact::to_fixed(p[1]), 2, box.points.size()});
  box.bottom = triangulate_layer(B, 0);
  box.top = triangulate_layer(T, off);
  for (int k = 0; k < 4; ++k) {
    // wall in (s, level): bottom row forward, top row backward
    PlanarDomain d;
    auto s_of = [&](const Layer& L, int i) {
      const Vec2 p = L.pts[i];
      return k == 0 ? p[0] : k == 1 ? p[1] : k == 2 ? 1 - p[0] : 1 - p[1];
    };
    for (std::size_t j = 0; j + 1 < B.side[k].size(); ++j) {
      const int i = B.side[k][j];
      d.boundary.push_back({{s_of(B, i), 0.0}, std::uint64_t(i)});
    }
    d.boundary.push_back({{1.0, 0.0}, std::uint64_t(B.side[k].back())});
    for (int j = int(T.side[k].size()) - 1; j > 0; --j) {
      const int i = T.side[k][j];
      d.boundary.push_back({{s_of(T, i), 1.0}, std::uint64_t(off + i)});
    }
    d.boundary.push_back({{0.0, 1.0}, std::uint64_t(off + T.side[k].front())});
    const Triangulation2 t = triangulate_conforming(d);
    for (const auto& tr : t.triangles)
      box.walls.push_back({int(t.points[tr[0]].id), int(t.points[tr[1]].id), int(t.points[tr[2]].id)});
  }
  return box;
}

}  // namespace

TEST(LayerTet, ConeCountsAndVolume) {
  const LayerBox box = make_box({2, 3, 2, 1}, {3, 1, 4, 2}, 5, 7, 1);
  const auto tets = tetrahedralize_layers(box, LayerStrategy::Cone);
  EXPECT_EQ(tets.size(), box.bottom.size() + box.top.size() + box.walls.size());
  EXPECT_NO_THROW(verify_layer_tets(box, tets));
  const int apex = int(box.points.size());
  for (const auto& t : tets) EXPECT_NE(std::find(t.begin(), t.end(), apex), t.end());
}

TEST(LayerTet, LocalIsValidOverRandomBoxes) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> side(1, 8), inner(0, 40);
  for (int trial = 0; trial < 40; ++trial) {
    const LayerBox box = make_box({side(rng), side(rng), side(rng), side(rng)},
                                  {side(rng), side(rng), side(rng), side(rng)}, inner(rng), inner(rng), rng());
    const auto tets = tetrahedralize_layers(box, LayerStrategy::Local);
    ASSERT_NO_THROW(verify_layer_tets(box, tets)) << "trial " << trial;
    // the apex is used
    bool apex = false;
    for (const auto& t : tets)
      for (int v : t) apex = apex || v == int(box.points.size());
    EXPECT_TRUE(apex);
  }
}

TEST(LayerTet, IdenticalLayersGivePrisms) {
  const LayerBox box = make_box({3, 3, 3, 3}, {3, 3, 3, 3}, 0, 0, 9);
  const auto tets = tetrahedralize_layers(box, LayerStrategy::Local);
  EXPECT_NO_THROW(verify_layer_tets(box, tets));
  EXPECT_LT(tets.size(), tetrahedralize_layers(box, LayerStrategy::Cone).size());
}

TEST(LayerTet, VerifyRejectsBrokenSets) {
  const LayerBox box = make_box({2, 2, 2, 2}, {2, 2, 2, 2}, 1, 1, 4);
  auto tets = tetrahedralize_layers(box, LayerStrategy::Local);
  auto missing = tets;
  missing.pop_back();
  EXPECT_THROW(verify_layer_tets(box, missing), TetrahedralizationError);
  auto flipped = tets;
  std::swap(flipped[0][0], flipped[0][1]);
  EXPECT_THROW(verify_layer_tets(box, flipped), TetrahedralizationError);
  LayerBox open = box;
  open.walls.pop_back();
  EXPECT_THROW(verify_layer_tets(open, tets), TetrahedralizationError);
}
