#include "spacetime/layer_tet.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>

namespace spacetime {
namespace {

using exact::P3;
using i128 = __int128;
using Key3 = std::array<int, 3>;
using Key4 = std::array<int, 4>;
constexpr std::int64_t kMax = exact::kFixedOne;

Key3 sorted3(int a, int b, int c) {
  Key3 k{a, b, c};
  std::sort(k.begin(), k.end());
  return k;
}

i128 det6(const P3& a, const P3& b, const P3& c, const P3& d) {
  const i128 ux = b.x - a.x, uy = b.y - a.y, ul = b.l - a.l;
  const i128 vx = c.x - a.x, vy = c.y - a.y, vl = c.l - a.l;
  const i128 wx = d.x - a.x, wy = d.y - a.y, wl = d.l - a.l;
  return ux * (vy * wl - vl * wy) - uy * (vx * wl - vl * wx) + ul * (vx * wy - vy * wx);
}

class Tetrahedralizer {
 public:
  explicit Tetrahedralizer(const LayerBox& box) : box_(box), p_(box.points) {
    P3 apex{kMax / 2, kMax / 2, 1, 0};
    for (const P3& q : p_) apex.rank = std::max(apex.rank, q.rank + 1);
    apex_ = int(p_.size());
    p_.push_back(apex);
    index(box.bottom, bottom_opp_, bottom_nbr_);
    index(box.top, top_opp_, top_nbr_);
  }

  std::vector<Key4> cone() const {
    std::vector<Key4> out;
    for (const auto* list : {&box_.bottom, &box_.top, &box_.walls})
      for (const auto& t : *list) out.push_back(positive({t[0], t[1], t[2], apex_}));
    return out;
  }

  std::vector<Key4> local() {
    regular();
    return insert_apex();
  }

 private:
  using EdgeMap = std::map<std::pair<int, int>, std::vector<int>>;
  using NbrMap = std::map<int, std::set<int>>;

  static void index(const std::vector<Key3>& tris, EdgeMap& opp, NbrMap& nbr) {
    for (const auto& t : tris)
      for (int k = 0; k < 3; ++k) {
        const int a = t[k], b = t[(k + 1) % 3], c = t[(k + 2) % 3];
        opp[{std::min(a, b), std::max(a, b)}].push_back(c);
        nbr[a].insert(b);
        nbr[a].insert(c);
      }
  }

  Key4 positive(Key4 t) const {
    const int o = exact::orient3d(p_[t[0]], p_[t[1]], p_[t[2]], p_[t[3]]);
    if (o == 0) throw TetrahedralizationError("flat tetrahedron");
    if (o < 0) std::swap(t[0], t[1]);
    return t;
  }

  bool on_boundary(const Key3& f) const {
    const P3 &a = p_[f[0]], &b = p_[f[1]], &c = p_[f[2]];
    if (a.l == b.l && b.l == c.l) return true;
    if (a.x == b.x && b.x == c.x && (a.x == 0 || a.x == kMax)) return true;
    if (a.y == b.y && b.y == c.y && (a.y == 0 || a.y == kMax)) return true;
    return false;
  }

  // Gift wrapping: the candidate whose lifted plane through the ridge has
  // nothing below it.
  int wrap(const Key3& f, const std::vector<int>& cands) const {
    int best = -1;
    for (int q : cands) {
      if (best < 0 || exact::lifted_side3(p_[f[0]], p_[f[1]], p_[f[2]], p_[best], p_[q]) < 0) best = q;
    }
    return best;
  }

  void add_tet(const Key4& t, std::deque<Key4>& queue) {
    Key4 k = t;
    std::sort(k.begin(), k.end());
    if (!seen_.insert(k).second) return;
    const Key4 pt = positive(t);
    tets_.push_back(pt);
    queue.push_back(pt);
  }

  void regular() {
    if (box_.bottom.empty() || box_.top.empty()) throw TetrahedralizationError("empty layer");
    std::vector<int> top_pts;
    for (int i = 0; i < apex_; ++i)
      if (p_[i].l == 2) top_pts.push_back(i);
    const Key3 b0 = box_.bottom.front();
    const Key3 seed = sorted3(b0[0], b0[1], b0[2]);
    std::deque<Key4> queue;
    add_tet({seed[0], seed[1], seed[2], wrap(seed, top_pts)}, queue);
    done_.insert(seed);

    while (!queue.empty()) {
      const Key4 t = queue.front();
      queue.pop_front();
      for (int i = 0; i < 4; ++i) {
        const int o = t[i];
        Key3 f{};
        for (int j = 0, k = 0; j < 4; ++j)
          if (j != i) f[k++] = t[j];
        std::sort(f.begin(), f.end());
        if (!done_.insert(f).second || on_boundary(f)) continue;

        std::vector<int> low, high;
        for (int v : f) (p_[v].l == 0 ? low : high).push_back(v);
        std::vector<int> cands;
        if (low.size() == 2) {
          const auto& opp = bottom_opp_[{std::min(low[0], low[1]), std::max(low[0], low[1])}];
          cands.insert(cands.end(), opp.begin(), opp.end());
          const auto& nb = top_nbr_[high[0]];
          cands.insert(cands.end(), nb.begin(), nb.end());
        } else {
          const auto& opp = top_opp_[{std::min(high[0], high[1]), std::max(high[0], high[1])}];
          cands.insert(cands.end(), opp.begin(), opp.end());
          const auto& nb = bottom_nbr_[low[0]];
          cands.insert(cands.end(), nb.begin(), nb.end());
        }
        const int so = exact::orient3d(p_[f[0]], p_[f[1]], p_[f[2]], p_[o]);
        std::vector<int> far;
        for (int q : cands)
          if (exact::orient3d(p_[f[0]], p_[f[1]], p_[f[2]], p_[q]) == -so) far.push_back(q);
        std::sort(far.begin(), far.end());
        far.erase(std::unique(far.begin(), far.end()), far.end());
        if (far.empty()) throw TetrahedralizationError("interior ridge without a neighbor");
        add_tet({f[0], f[1], f[2], wrap(f, far)}, queue);
      }
    }
  }

  std::vector<Key4> insert_apex() const {
    std::vector<Key4> out;
    std::map<Key3, std::pair<int, Key4>> star_faces;
    for (const Key4& t : tets_) {
      bool inside = true;
      for (int i = 0; i < 4 && inside; ++i) {
        Key4 q = t;
        q[i] = apex_;
        inside = exact::orient3d(p_[q[0]], p_[q[1]], p_[q[2]], p_[q[3]]) >= 0;
      }
      if (!inside) {
        out.push_back(t);
        continue;
      }
      for (int i = 0; i < 4; ++i) {
        Key4 q = t;
        q[i] = apex_;
        Key3 f{};
        for (int j = 0, k = 0; j < 4; ++j)
          if (j != i) f[k++] = t[j];
        std::sort(f.begin(), f.end());
        auto& e = star_faces[f];
        ++e.first;
        e.second = q;
      }
    }
    bool any = false;
    for (const auto& [f, e] : star_faces) {
      if (e.first != 1) continue;
      const Key4& q = e.second;
      if (exact::orient3d(p_[q[0]], p_[q[1]], p_[q[2]], p_[q[3]]) <= 0)
        throw TetrahedralizationError("apex does not see its star boundary");
      out.push_back(q);
      any = true;
    }
    if (!any) throw TetrahedralizationError("apex is outside every tetrahedron");
    return out;
  }

  const LayerBox& box_;
  std::vector<P3> p_;
  int apex_ = 0;
  EdgeMap bottom_opp_, top_opp_;
  NbrMap bottom_nbr_, top_nbr_;
  std::set<Key4> seen_;
  std::set<Key3> done_;
  std::vector<Key4> tets_;
};

}  // namespace

std::vector<std::array<int, 4>> tetrahedralize_layers(const LayerBox& box, LayerStrategy strategy) {
  Tetrahedralizer t(box);
  return strategy == LayerStrategy::Cone ? t.cone() : t.local();
}

void verify_layer_tets(const LayerBox& box, const std::vector<std::array<int, 4>>& tets) {
  std::vector<P3> p = box.points;
  p.push_back({kMax / 2, kMax / 2, 1, 0});
  const int n = int(p.size());

  std::set<Key3> boundary;
  std::map<std::pair<int, int>, int> edge_use;
  for (const auto* list : {&box.bottom, &box.top, &box.walls})
    for (const auto& t : *list) {
      if (!boundary.insert(sorted3(t[0], t[1], t[2])).second)
        throw TetrahedralizationError("repeated boundary triangle");
      for (int k = 0; k < 3; ++k) {
        const int a = t[k], b = t[(k + 1) % 3];
        ++edge_use[{std::min(a, b), std::max(a, b)}];
      }
    }
  for (const auto& [e, c] : edge_use)
    if (c != 2) throw TetrahedralizationError("box boundary surface is not closed");

  i128 vol = 0;
  std::map<Key3, std::vector<int>> faces;  // face -> opposite vertices
  for (const auto& t : tets) {
    for (int v : t)
      if (v < 0 || v >= n) throw TetrahedralizationError("tet vertex out of range");
    const i128 d = det6(p[t[0]], p[t[1]], p[t[2]], p[t[3]]);
    if (d <= 0) throw TetrahedralizationError("non-positive tetrahedron");
    vol += d;
    for (int i = 0; i < 4; ++i) {
      Key3 f{};
      for (int j = 0, k = 0; j < 4; ++j)
        if (j != i) f[k++] = t[j];
      faces[sorted3(f[0], f[1], f[2])].push_back(t[i]);
    }
  }
  if (vol != i128(12) * kMax * kMax) throw TetrahedralizationError("tet volumes do not fill the box");
  std::size_t exposed = 0;
  for (const auto& [f, opp] : faces) {
    if (opp.size() == 1) {
      if (!boundary.count(f)) throw TetrahedralizationError("exposed face off the box boundary");
      ++exposed;
    } else if (opp.size() == 2) {
      const int s0 = exact::orient3d(p[f[0]], p[f[1]], p[f[2]], p[opp[0]]);
      const int s1 = exact::orient3d(p[f[0]], p[f[1]], p[f[2]], p[opp[1]]);
      if (s0 * s1 >= 0) throw TetrahedralizationError("overlapping tetrahedra");
    } else {
      throw TetrahedralizationError("face shared by more than two tetrahedra");
    }
  }
  if (exposed != boundary.size()) throw TetrahedralizationError("box boundary not covered");
}

}  // namespace spacetime
