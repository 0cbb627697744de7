#include "spacetime/exact.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>

namespace spacetime::exact {
namespace {

using i128 = __int128;
using boost::multiprecision::int256_t;

template <class T>
int sign_of(const T& v) {
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

i128 lift(std::int64_t x, std::int64_t y) { return i128(x) * x + i128(y) * y; }

// det of [[a0 a1 a2] [b0 b1 b2] [c0 c1 c2]] where column 2 is small (|.| <= 4).
i128 det3_small_last(const std::array<i128, 3>& a, const std::array<i128, 3>& b,
                     const std::array<i128, 3>& c) {
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
         a[2] * (b[0] * c[1] - b[1] * c[0]);
}

// Symbolic perturbation: lift(p) += eps^(order of p's rank). The first
// nonzero coefficient in rank order decides. Query coefficient is +1,
// simplex vertex i contributes -lambda_i.
template <std::size_t K, class LambdaSign>
int perturbed(const std::array<std::uint64_t, K>& ranks, std::uint64_t query_rank,
              LambdaSign lambda_sign) {
  std::array<std::size_t, K + 1> order{};
  for (std::size_t i = 0; i <= K; ++i) order[i] = i;
  auto rank_of = [&](std::size_t i) { return i == K ? query_rank : ranks[i]; };
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return rank_of(a) < rank_of(b); });
  for (std::size_t i : order) {
    if (i == K) return 1;
    const int s = lambda_sign(i);
    if (s != 0) return -s;
  }
  return 0;
}

}  // namespace

std::int64_t to_fixed(double unit) { return std::llround(std::ldexp(unit, kFixedBits)); }

double from_fixed(std::int64_t v) { return std::ldexp(static_cast<double>(v), -kFixedBits); }

int orient2d(const P2& a, const P2& b, const P2& c) {
  const i128 d = i128(b.x - a.x) * (c.y - a.y) - i128(b.y - a.y) * (c.x - a.x);
  return sign_of(d);
}

int orient3d(const P3& a, const P3& b, const P3& c, const P3& d) {
  const std::array<i128, 3> u{b.x - a.x, b.y - a.y, b.l - a.l};
  const std::array<i128, 3> v{c.x - a.x, c.y - a.y, c.l - a.l};
  const std::array<i128, 3> w{d.x - a.x, d.y - a.y, d.l - a.l};
  return sign_of(det3_small_last(u, v, w));
}

int lifted_side2(const P2& a, const P2& b, const P2& c, const P2& d) {
  const int o = orient2d(a, b, c);
  const i128 wd = lift(d.x, d.y);
  const std::array<const P2*, 3> p{&a, &b, &c};
  std::array<i128, 3> dx{}, dy{}, dw{};
  for (int i = 0; i < 3; ++i) {
    dx[i] = p[i]->x - d.x;
    dy[i] = p[i]->y - d.y;
    dw[i] = lift(p[i]->x, p[i]->y) - wd;
  }
  const i128 m0 = dx[1] * dy[2] - dy[1] * dx[2];
  const i128 m1 = dx[0] * dy[2] - dy[0] * dx[2];
  const i128 m2 = dx[0] * dy[1] - dy[0] * dx[1];
  const int256_t det = int256_t(dw[0]) * int256_t(m0) - int256_t(dw[1]) * int256_t(m1) +
                       int256_t(dw[2]) * int256_t(m2);
  const int s = sign_of(det);
  if (s != 0) return -s * o;

  const std::array<std::uint64_t, 3> ranks{a.rank, b.rank, c.rank};
  return perturbed<3>(ranks, d.rank, [&](std::size_t i) {
    std::array<P2, 3> q{a, b, c};
    q[i] = d;
    return orient2d(q[0], q[1], q[2]) * o;
  });
}

int lifted_side3(const P3& a, const P3& b, const P3& c, const P3& d, const P3& y) {
  const int o = orient3d(a, b, c, d);
  const i128 wy = lift(y.x, y.y);
  const std::array<const P3*, 4> p{&a, &b, &c, &d};
  std::array<std::array<i128, 3>, 4> r{};
  std::array<i128, 4> dw{};
  for (int i = 0; i < 4; ++i) {
    r[i] = {p[i]->x - y.x, p[i]->y - y.y, p[i]->l - y.l};
    dw[i] = lift(p[i]->x, p[i]->y) - wy;
  }
  // Expand along the lift column; cofactor sign (-1)^(i+3).
  int256_t det = 0;
  for (int i = 0; i < 4; ++i) {
    std::array<std::array<i128, 3>, 3> m{};
    for (int j = 0, k = 0; j < 4; ++j)
      if (j != i) m[k++] = r[j];
    const int256_t term = int256_t(dw[i]) * int256_t(det3_small_last(m[0], m[1], m[2]));
    if ((i + 3) % 2 == 0)
      det += term;
    else
      det -= term;
  }
  const int s = sign_of(det);
  if (s != 0) return s * o;

  const std::array<std::uint64_t, 4> ranks{a.rank, b.rank, c.rank, d.rank};
  return perturbed<4>(ranks, y.rank, [&](std::size_t i) {
    std::array<P3, 4> q{a, b, c, d};
    q[i] = y;
    return orient3d(q[0], q[1], q[2], q[3]) * o;
  });
}

}  // namespace spacetime::exact
