#pragma once

// Real quaternions x0 + x1 i + x2 j + x3 k with the Hamilton product
//   i^2 = j^2 = k^2 = -1,  ij = -ji = k,  jk = -kj = i,  ki = -ik = j.

#include <algorithm>
#include <cmath>
#include <ostream>

#include "qineq/error.hpp"

namespace qineq {

struct Quaternion {
  double x0 = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double re) : x0(re) {}  // NOLINT: reals embed implicitly
  constexpr Quaternion(double a, double b, double c, double d) : x0(a), x1(b), x2(c), x3(d) {}

  static constexpr Quaternion i() { return {0, 1, 0, 0}; }
  static constexpr Quaternion j() { return {0, 0, 1, 0}; }
  static constexpr Quaternion k() { return {0, 0, 0, 1}; }

  constexpr double real() const { return x0; }
  constexpr Quaternion imag() const { return {0, x1, x2, x3}; }
  constexpr double imag_norm2() const { return x1 * x1 + x2 * x2 + x3 * x3; }

  constexpr Quaternion& operator+=(const Quaternion& o) {
    x0 += o.x0; x1 += o.x1; x2 += o.x2; x3 += o.x3;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& o) {
    x0 -= o.x0; x1 -= o.x1; x2 -= o.x2; x3 -= o.x3;
    return *this;
  }
  constexpr Quaternion& operator*=(double s) {
    x0 *= s; x1 *= s; x2 *= s; x3 *= s;
    return *this;
  }

  friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
constexpr Quaternion operator-(const Quaternion& a) { return {-a.x0, -a.x1, -a.x2, -a.x3}; }
constexpr Quaternion operator*(Quaternion a, double s) { return a *= s; }
constexpr Quaternion operator*(double s, Quaternion a) { return a *= s; }
constexpr Quaternion operator/(Quaternion a, double s) { return a *= (1.0 / s); }

/// Hamilton product. Not commutative.
constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
  return {a.x0 * b.x0 - a.x1 * b.x1 - a.x2 * b.x2 - a.x3 * b.x3,
          a.x0 * b.x1 + a.x1 * b.x0 + a.x2 * b.x3 - a.x3 * b.x2,
          a.x0 * b.x2 - a.x1 * b.x3 + a.x2 * b.x0 + a.x3 * b.x1,
          a.x0 * b.x3 + a.x1 * b.x2 - a.x2 * b.x1 + a.x3 * b.x0};
}

constexpr Quaternion conj(const Quaternion& a) { return {a.x0, -a.x1, -a.x2, -a.x3}; }

constexpr double norm2(const Quaternion& a) {
  return a.x0 * a.x0 + a.x1 * a.x1 + a.x2 * a.x2 + a.x3 * a.x3;
}

inline double abs(const Quaternion& a) {
  // hypot chain avoids overflow for large components
  return std::hypot(std::hypot(a.x0, a.x1), std::hypot(a.x2, a.x3));
}

inline Quaternion inv(const Quaternion& a) {
  const double n2 = norm2(a);
  if (n2 == 0.0) throw DomainError("non-invertible quaternion");
  return conj(a) / n2;
}

/// Hybrid componentwise comparison: |a_k - b_k| <= tol * max(1, |a|, |b|).
inline bool approx_equal(const Quaternion& a, const Quaternion& b, double tol = 1e-12) {
  const double scale = std::max({1.0, abs(a), abs(b)});
  const Quaternion d = a - b;
  return std::abs(d.x0) <= tol * scale && std::abs(d.x1) <= tol * scale &&
         std::abs(d.x2) <= tol * scale && std::abs(d.x3) <= tol * scale;
}

inline std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
  return os << '(' << q.x0 << ", " << q.x1 << ", " << q.x2 << ", " << q.x3 << ')';
}

}  // namespace qineq
