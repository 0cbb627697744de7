#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace spacetime {

/// Fixed-size real vector. Aggregate, so `Vec3{1, 2, 3}` works.
template <std::size_t N>
struct Vec {
  std::array<double, N> c{};

  double& operator[](std::size_t i) { return c[i]; }
  double operator[](std::size_t i) const { return c[i]; }

  Vec& operator+=(const Vec& o) {
    for (std::size_t i = 0; i < N; ++i) c[i] += o.c[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (std::size_t i = 0; i < N; ++i) c[i] -= o.c[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (auto& x : c) x *= s;
    return *this;
  }

  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(Vec a, double s) { return a *= s; }
  friend Vec operator*(double s, Vec a) { return a *= s; }
  friend Vec operator-(Vec a) { return a *= -1.0; }
  friend bool operator==(const Vec& a, const Vec& b) { return a.c == b.c; }
};

using Vec2 = Vec<2>;
using Vec3 = Vec<3>;
using Vec4 = Vec<4>;

template <std::size_t N>
double dot(const Vec<N>& a, const Vec<N>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i) s += a[i] * b[i];
  return s;
}

template <std::size_t N>
double norm(const Vec<N>& a) {
  return std::sqrt(dot(a, a));
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

/// (1-w)a + w b. Exact at w = 0 and w = 1.
template <std::size_t N>
Vec<N> lerp(const Vec<N>& a, const Vec<N>& b, double w) {
  Vec<N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = (1.0 - w) * a[i] + w * b[i];
  return r;
}

inline double lerp(double a, double b, double w) { return (1.0 - w) * a + w * b; }

inline Vec4 with_time(const Vec3& x, double t) { return {x[0], x[1], x[2], t}; }
inline Vec3 spatial(const Vec4& p) { return {p[0], p[1], p[2]}; }

}  // namespace spacetime
