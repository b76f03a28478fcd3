#pragma once

// Seeded instance generators. Every generator is a pure function of its
// seed, so parallel trials partition the seed space with derive_seed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qineq/error.hpp"
#include "qineq/qlinalg.hpp"
#include "qineq/quaternion.hpp"

namespace qineq {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based seed for trial `index` of stream `stream` under `master`.
/// Trial k can be reproduced without generating trials 0..k-1.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(master ^ splitmix64(stream)) + index);
}

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Quaternion random_quaternion(Rng& rng) {
  std::normal_distribution<double> g;
  const double a = g(rng), b = g(rng), c = g(rng), d = g(rng);
  return {a, b, c, d};
}

/// Standard-normal quaternion entries.
inline QMatrix random_matrix(std::size_t n, Rng& rng) {
  QMatrix m(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m(r, c) = random_quaternion(rng);
  return m;
}

inline QMatrix random_matrix(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return random_matrix(n, rng);
}

/// Random quaternionic unitary: modified Gram-Schmidt (two passes) over the
/// columns of a standard-normal matrix, with right scalar projections.
inline QMatrix random_unitary(std::size_t n, Rng& rng) {
  const QMatrix g = random_matrix(n, rng);
  std::vector<QVector> cols(n, QVector(n));
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) cols[c][r] = g(r, c);

  for (std::size_t c = 0; c < n; ++c) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t p = 0; p < c; ++p) cols[c] = cols[c] - cols[p] * inner(cols[p], cols[c]);
    }
    const double len = norm(cols[c]);
    if (len < 1e-12) throw ComputationError("random_unitary: rank-deficient draw");
    cols[c] = cols[c] * Quaternion(1.0 / len);
  }

  QMatrix u(n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) u(r, c) = cols[c][r];
  return u;
}

/// U diag(d) U* with d real, symmetrized so the result is exactly selfadjoint.
inline QMatrix conjugate_diagonal(const QMatrix& u, std::span<const double> d) {
  const std::size_t n = u.dim();
  QMatrix t(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = r; c < n; ++c) {
      Quaternion s;
      for (std::size_t k = 0; k < n; ++k) s += u(r, k) * d[k] * conj(u(c, k));
      t(r, c) = s;
    }
  }
  for (std::size_t r = 0; r < n; ++r) {
    t(r, r) = t(r, r).real();
    for (std::size_t c = r + 1; c < n; ++c) t(c, r) = conj(t(r, c));
  }
  return t;
}

/// Eigenvalue draw for random_selfadjoint: uniform in [m, M], with both
/// endpoints present when n >= 2.
inline std::vector<double> random_spectrum(std::size_t n, double m, double big_m, Rng& rng) {
  std::vector<double> d(n);
  for (auto& v : d) v = uniform(rng, m, big_m);
  if (n >= 2) {
    d[0] = m;
    d[1] = big_m;
  }
  return d;
}

/// Selfadjoint T = U D U* with sigma_S(T) in [m, M]; min and max attained when n >= 2.
inline QMatrix random_selfadjoint(std::size_t n, double m, double big_m, std::uint64_t seed) {
  if (n < 1) throw UsageError("random_selfadjoint: n must be >= 1");
  if (!(m < big_m)) throw UsageError("random_selfadjoint: requires m < M");
  Rng rng(seed);
  const std::vector<double> d = random_spectrum(n, m, big_m, rng);
  const QMatrix u = random_unitary(n, rng);
  return conjugate_diagonal(u, d);
}

/// Normal T = U diag(q_k) U* with arbitrary quaternion diagonal.
inline QMatrix random_normal(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  const QMatrix u = random_unitary(n, rng);
  QMatrix d(n);
  for (std::size_t k = 0; k < n; ++k) d(k, k) = random_quaternion(rng);
  return u * d * adjoint(u);
}

inline QVector random_unit_vector(std::size_t n, Rng& rng) {
  if (n < 1) throw UsageError("random_unit_vector: n must be >= 1");
  QVector x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = random_quaternion(rng);
  const double len = norm(x);
  if (!(len > 1e-300)) return QVector::basis(n, 0);
  for (std::size_t k = 0; k < n; ++k) x[k] = x[k] / len;
  return x;
}

inline QVector random_unit_vector(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return random_unit_vector(n, rng);
}

}  // namespace qineq
