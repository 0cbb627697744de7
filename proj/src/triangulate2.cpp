#include "spacetime/triangulate2.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <unordered_map>

#include "spacetime/exact.hpp"

namespace spacetime {
namespace {

using exact::P2;
using i128 = __int128;
constexpr std::int64_t kMax = exact::kFixedOne;

struct Tri {
  std::array<int, 3> v;
  std::array<int, 3> nbr;  // nbr[i] is across the edge opposite v[i]
  bool alive = true;
};

class Builder {
 public:
  explicit Builder(std::vector<P2> pts) : p_(std::move(pts)) {}

  void init(int c0, int c1, int c2, int c3) {
    // Square split along the locally Delaunay diagonal.
    if (exact::lifted_side2(p_[c0], p_[c1], p_[c2], p_[c3]) < 0) {
      add({c0, c1, c3}, {1, -1, -1});
      add({c1, c2, c3}, {-1, 0, -1});
    } else {
      add({c0, c1, c2}, {-1, 1, -1});
      add({c0, c2, c3}, {-1, -1, 0});
    }
  }

  void insert(int pi) {
    const int start = locate(pi);
    // cavity of triangles whose circumcircle contains p
    std::vector<int> cavity{start}, stack{start};
    std::set<int> in_cavity{start};
    while (!stack.empty()) {
      const int t = stack.back();
      stack.pop_back();
      for (int k = 0; k < 3; ++k) {
        const int n = tris_[t].nbr[k];
        if (n < 0 || in_cavity.count(n)) continue;
        const auto& v = tris_[n].v;
        if (exact::lifted_side2(p_[v[0]], p_[v[1]], p_[v[2]], p_[pi]) < 0) {
          in_cavity.insert(n);
          cavity.push_back(n);
          stack.push_back(n);
        }
      }
    }
    std::unordered_map<int, int> by_a, by_b;
    std::vector<int> created;
    for (int t : cavity) {
      for (int k = 0; k < 3; ++k) {
        const int n = tris_[t].nbr[k];
        if (n >= 0 && in_cavity.count(n)) continue;
        const int a = tris_[t].v[(k + 1) % 3], b = tris_[t].v[(k + 2) % 3];
        const int o = exact::orient2d(p_[a], p_[b], p_[pi]);
        if (o == 0 && n < 0) continue;  // p splits this hull segment
        if (o <= 0) throw TriangulationError("cavity is not star-shaped");
        const int nt = add({a, b, pi}, {-1, -1, n});
        if (n >= 0) {
          auto& nb = tris_[n].nbr;
          for (int j = 0; j < 3; ++j)
            if (nb[j] == t) nb[j] = nt;
        }
        by_a[a] = nt;
        by_b[b] = nt;
        created.push_back(nt);
      }
    }
    for (int t : cavity) tris_[t].alive = false;
    for (int nt : created) {
      Tri& tr = tris_[nt];
      auto ia = by_a.find(tr.v[1]);  // edge (b, p)
      auto ib = by_b.find(tr.v[0]);  // edge (p, a)
      tr.nbr[0] = ia == by_a.end() ? -1 : ia->second;
      tr.nbr[1] = ib == by_b.end() ? -1 : ib->second;
    }
    last_ = created.front();
  }

  std::vector<std::array<int, 3>> triangles() const {
    std::vector<std::array<int, 3>> out;
    for (const Tri& t : tris_)
      if (t.alive) out.push_back(t.v);
    return out;
  }

 private:
  int add(std::array<int, 3> v, std::array<int, 3> nbr) {
    tris_.push_back(Tri{v, nbr, true});
    return int(tris_.size()) - 1;
  }

  bool contains(int t, int pi) const {
    const auto& v = tris_[t].v;
    for (int k = 0; k < 3; ++k)
      if (exact::orient2d(p_[v[(k + 1) % 3]], p_[v[(k + 2) % 3]], p_[pi]) < 0) return false;
    return true;
  }

  int locate(int pi) {
    int t = last_;
    if (t < 0 || !tris_[t].alive) {
      for (t = int(tris_.size()) - 1; t >= 0 && !tris_[t].alive; --t) {
      }
    }
    const std::size_t limit = 4 * tris_.size() + 16;
    for (std::size_t step = 0; step < limit; ++step) {
      const auto& tr = tris_[t];
      int next = -1;
      for (int k = 0; k < 3; ++k) {
        const int kk = (k + int(step)) % 3;  // rotate start to avoid cycling
        if (exact::orient2d(p_[tr.v[(kk + 1) % 3]], p_[tr.v[(kk + 2) % 3]], p_[pi]) < 0) {
          next = tr.nbr[kk];
          if (next < 0) throw TriangulationError("point outside the triangulated region");
          break;
        }
      }
      if (next < 0) return t;
      t = next;
    }
    for (std::size_t i = 0; i < tris_.size(); ++i)
      if (tris_[i].alive && contains(int(i), pi)) return int(i);
    throw TriangulationError("point location failed");
  }

  std::vector<P2> p_;
  std::vector<Tri> tris_;
  int last_ = -1;
};

std::int64_t perimeter_coord(const P2& q) {
  if (q.y == 0) return q.x;
  if (q.x == kMax) return kMax + q.y;
  if (q.y == kMax) return 2 * kMax + (kMax - q.x);
  return (3 * kMax + (kMax - q.y)) % (4 * kMax);
}

}  // namespace

Triangulation2 triangulate_conforming(const PlanarDomain& d) {
  const double wx = d.hi[0] - d.lo[0], wy = d.hi[1] - d.lo[1];
  if (!(wx > 0 && wy > 0)) throw TriangulationError("empty rectangle");
  const std::size_t nb = d.boundary.size();
  if (nb < 4) throw TriangulationError("boundary needs at least the four corners");

  Triangulation2 out;
  out.points.reserve(nb + d.interior.size());
  out.points.insert(out.points.end(), d.boundary.begin(), d.boundary.end());
  out.points.insert(out.points.end(), d.interior.begin(), d.interior.end());
  out.steiner.assign(out.points.size(), false);

  std::vector<P2> q(out.points.size());
  std::vector<Vec2> unit(out.points.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    const Vec2& p = out.points[i].p;
    unit[i] = {(p[0] - d.lo[0]) / wx, (p[1] - d.lo[1]) / wy};
    q[i] = {exact::to_fixed(unit[i][0]), exact::to_fixed(unit[i][1]), out.points[i].id};
  }

  // boundary: on the perimeter, counter-clockwise, once around
  std::array<int, 4> corner{-1, -1, -1, -1};
  std::int64_t turn = 0;
  for (std::size_t i = 0; i < nb; ++i) {
    const Vec2& p = out.points[i].p;
    const bool on = p[0] == d.lo[0] || p[0] == d.hi[0] || p[1] == d.lo[1] || p[1] == d.hi[1];
    if (!on) throw TriangulationError("boundary point " + std::to_string(i) + " is off the perimeter");
    const P2& a = q[i];
    if (a.x == 0 && a.y == 0) corner[0] = int(i);
    if (a.x == kMax && a.y == 0) corner[1] = int(i);
    if (a.x == kMax && a.y == kMax) corner[2] = int(i);
    if (a.x == 0 && a.y == kMax) corner[3] = int(i);
    const std::int64_t step =
        (perimeter_coord(q[(i + 1) % nb]) - perimeter_coord(a) + 4 * kMax) % (4 * kMax);
    if (step == 0) throw TriangulationError("duplicate boundary point");
    turn += step;
  }
  if (turn != 4 * kMax) throw TriangulationError("boundary is not a simple counter-clockwise loop");
  for (int c : corner)
    if (c < 0) throw TriangulationError("boundary is missing a rectangle corner");
  for (std::size_t i = nb; i < q.size(); ++i)
    if (q[i].x <= 0 || q[i].x >= kMax || q[i].y <= 0 || q[i].y >= kMax)
      throw TriangulationError("interior point " + std::to_string(i - nb) + " is not strictly inside");

  // duplicates: exact on the grid, then within 1e-14
  {
    std::vector<int> order(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) order[i] = int(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return unit[a][0] != unit[b][0] ? unit[a][0] < unit[b][0] : unit[a][1] < unit[b][1];
    });
    for (std::size_t i = 0; i < order.size(); ++i)
      for (std::size_t j = i + 1; j < order.size() && unit[order[j]][0] - unit[order[i]][0] <= 1e-14; ++j)
        if (std::abs(unit[order[j]][1] - unit[order[i]][1]) <= 1e-14)
          throw TriangulationError("duplicate points within 1e-14");
    std::set<std::uint64_t> ids;
    for (const P2& a : q)
      if (!ids.insert(a.rank).second) throw TriangulationError("duplicate point id");
  }

  Builder b(q);
  b.init(corner[0], corner[1], corner[2], corner[3]);
  for (std::size_t i = 0; i < q.size(); ++i)
    if (std::find(corner.begin(), corner.end(), int(i)) == corner.end()) b.insert(int(i));
  out.triangles = b.triangles();

  // conformity and area audit
  std::set<std::pair<int, int>> hull;
  i128 area2 = 0;
  {
    std::set<std::pair<int, int>> directed;
    for (const auto& t : out.triangles) {
      const i128 a = i128(q[t[1]].x - q[t[0]].x) * (q[t[2]].y - q[t[0]].y) -
                     i128(q[t[1]].y - q[t[0]].y) * (q[t[2]].x - q[t[0]].x);
      if (a <= 0) throw TriangulationError("non-positive triangle");
      area2 += a;
      for (int k = 0; k < 3; ++k) directed.insert({t[k], t[(k + 1) % 3]});
    }
    for (const auto& [u, v] : directed)
      if (!directed.count({v, u})) hull.insert({u, v});
  }
  if (area2 != i128(kMax) * kMax * 2) throw TriangulationError("area mismatch");
  if (hull.size() != nb) throw TriangulationError("boundary segment missing from triangulation");
  for (std::size_t i = 0; i < nb; ++i)
    if (!hull.count({int(i), int((i + 1) % nb)}))
      throw TriangulationError("boundary segment " + std::to_string(i) + " not recovered");
  return out;
}

double signed_area2(const Triangulation2& tri) {
  double s = 0.0;
  for (const auto& t : tri.triangles) {
    const Vec2 a = tri.points[t[0]].p, b = tri.points[t[1]].p, c = tri.points[t[2]].p;
    s += (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
  }
  return s;
}

}  // namespace spacetime
