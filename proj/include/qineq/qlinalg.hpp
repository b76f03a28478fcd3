#pragma once

// Right quaternionic vector space H^n and right-linear operators on it.
//
// Scalars act on vectors from the right, (u p)_k = u_k p, and matrix entries
// multiply vector components from the left, (T u)_r = sum_c T_rc u_c, so
// T(u p + v) = (T u) p + T v holds exactly.
//
// Complex computations go through the complex adjoint embedding chi: writing
// each entry as q = A + B j with A, B in span{1, i},
//
//   chi(T) = [[ A,        B      ],
//             [ -conj(B), conj(A) ]]            (2n x 2n, block form)
//
// chi is an injective *-homomorphism of real algebras. Its image is exactly
// the set of M with M = -J conj(M) J, J = [[0, I], [-I, 0]].

#include <Eigen/Dense>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <complex>
#include <limits>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qineq/error.hpp"
#include "qineq/quaternion.hpp"

namespace qineq {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

inline constexpr std::size_t kMaxDim = 64;

class QVector {
 public:
  QVector() = default;
  explicit QVector(std::size_t n) : entries_(n) {}
  QVector(std::initializer_list<Quaternion> init) : entries_(init) {}
  explicit QVector(std::vector<Quaternion> entries) : entries_(std::move(entries)) {}

  std::size_t size() const { return entries_.size(); }
  Quaternion& operator[](std::size_t k) { return entries_[k]; }
  const Quaternion& operator[](std::size_t k) const { return entries_[k]; }
  std::span<const Quaternion> entries() const { return entries_; }

  static QVector basis(std::size_t n, std::size_t k) {
    QVector e(n);
    e[k] = 1.0;
    return e;
  }

  friend bool operator==(const QVector&, const QVector&) = default;

 private:
  std::vector<Quaternion> entries_;
};

/// Square quaternion matrix, row-major.
class QMatrix {
 public:
  QMatrix() = default;
  explicit QMatrix(std::size_t n) : n_(n), entries_(n * n) {}
  QMatrix(std::initializer_list<std::initializer_list<Quaternion>> rows) : n_(rows.size()) {
    entries_.reserve(n_ * n_);
    for (const auto& row : rows) {
      if (row.size() != n_) throw UsageError("QMatrix: rows must have length n");
      entries_.insert(entries_.end(), row.begin(), row.end());
    }
  }

  static QMatrix identity(std::size_t n) { return scalar(n, 1.0); }
  static QMatrix scalar(std::size_t n, double c) {
    QMatrix m(n);
    for (std::size_t k = 0; k < n; ++k) m(k, k) = c;
    return m;
  }
  static QMatrix diagonal(std::span<const double> d) {
    QMatrix m(d.size());
    for (std::size_t k = 0; k < d.size(); ++k) m(k, k) = d[k];
    return m;
  }
  static QMatrix diagonal(std::initializer_list<double> d) {
    return diagonal(std::span<const double>(d.begin(), d.size()));
  }

  std::size_t dim() const { return n_; }
  Quaternion& operator()(std::size_t r, std::size_t c) { return entries_[r * n_ + c]; }
  const Quaternion& operator()(std::size_t r, std::size_t c) const { return entries_[r * n_ + c]; }
  std::span<const Quaternion> entries() const { return entries_; }

  QMatrix& operator+=(const QMatrix& o) {
    require_same(o);
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
    return *this;
  }
  QMatrix& operator-=(const QMatrix& o) {
    require_same(o);
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
    return *this;
  }
  QMatrix& operator*=(double s) {
    for (auto& q : entries_) q *= s;
    return *this;
  }

  friend bool operator==(const QMatrix&, const QMatrix&) = default;

 private:
  void require_same(const QMatrix& o) const {
    if (o.n_ != n_) throw UsageError("dimension mismatch");
  }

  std::size_t n_ = 0;
  std::vector<Quaternion> entries_;
};

inline QMatrix operator+(QMatrix a, const QMatrix& b) { return a += b; }
inline QMatrix operator-(QMatrix a, const QMatrix& b) { return a -= b; }
inline QMatrix operator*(QMatrix a, double s) { return a *= s; }
inline QMatrix operator*(double s, QMatrix a) { return a *= s; }

/// Right scalar action u -> u p.
inline QVector operator*(const QVector& u, const Quaternion& p) {
  QVector out(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = u[k] * p;
  return out;
}

inline QVector operator+(const QVector& u, const QVector& v) {
  if (u.size() != v.size()) throw UsageError("dimension mismatch");
  QVector out(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = u[k] + v[k];
  return out;
}

inline QVector operator-(const QVector& u, const QVector& v) {
  if (u.size() != v.size()) throw UsageError("dimension mismatch");
  QVector out(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = u[k] - v[k];
  return out;
}

/// <u, v> = sum_k conj(u_k) v_k; right-linear in v.
inline Quaternion inner(const QVector& u, const QVector& v) {
  if (u.size() != v.size()) throw UsageError("inner: dimension mismatch");
  Quaternion s;
  for (std::size_t k = 0; k < u.size(); ++k) s += conj(u[k]) * v[k];
  return s;
}

inline double norm(const QVector& u) {
  double s = 0.0;
  for (const auto& q : u.entries()) s += norm2(q);
  return std::sqrt(s);
}

inline QVector apply(const QMatrix& t, const QVector& u) {
  const std::size_t n = t.dim();
  if (u.size() != n) throw UsageError("apply: dimension mismatch");
  QVector out(n);
  for (std::size_t r = 0; r < n; ++r) {
    Quaternion s;
    for (std::size_t c = 0; c < n; ++c) s += t(r, c) * u[c];
    out[r] = s;
  }
  return out;
}

inline QMatrix matmul(const QMatrix& s, const QMatrix& t) {
  const std::size_t n = s.dim();
  if (t.dim() != n) throw UsageError("matmul: dimension mismatch");
  QMatrix out(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      const Quaternion& a = s(r, k);
      for (std::size_t c = 0; c < n; ++c) out(r, c) += a * t(k, c);
    }
  }
  return out;
}

inline QMatrix operator*(const QMatrix& s, const QMatrix& t) { return matmul(s, t); }

/// Conjugate transpose.
inline QMatrix adjoint(const QMatrix& t) {
  const std::size_t n = t.dim();
  QMatrix out(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) out(c, r) = conj(t(r, c));
  return out;
}

inline double frobenius_norm(const QMatrix& t) {
  double s = 0.0;
  for (const auto& q : t.entries()) s += norm2(q);
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// Complex adjoint embedding

struct ComplexBlock {
  CMatrix m;
  std::size_t n = 0;
};

inline ComplexBlock chi(const QMatrix& t) {
  const auto n = static_cast<Eigen::Index>(t.dim());
  ComplexBlock out{CMatrix::Zero(2 * n, 2 * n), t.dim()};
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      const Quaternion& q = t(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
      const cplx a(q.x0, q.x1);
      const cplx b(q.x2, q.x3);
      out.m(r, c) = a;
      out.m(r, n + c) = b;
      out.m(n + r, c) = -std::conj(b);
      out.m(n + r, n + c) = std::conj(a);
    }
  }
  return out;
}

/// -J conj(M) J for J = [[0, I], [-I, 0]]; equals M iff M lies in the image of chi.
inline CMatrix structure_reflection(const CMatrix& m) {
  const Eigen::Index n = m.rows() / 2;
  CMatrix out(m.rows(), m.cols());
  out.topLeftCorner(n, n) = m.bottomRightCorner(n, n).conjugate();
  out.topRightCorner(n, n) = -m.bottomLeftCorner(n, n).conjugate();
  out.bottomLeftCorner(n, n) = -m.topRightCorner(n, n).conjugate();
  out.bottomRightCorner(n, n) = m.topLeftCorner(n, n).conjugate();
  return out;
}

/// Frobenius norm of M + J conj(M) J.
inline double structure_residual(const CMatrix& m) {
  return (m - structure_reflection(m)).norm();
}

/// Default acceptance threshold for chi_inv's structure check.
inline double default_structure_tol(const CMatrix& m) {
  return 1e-10 * std::max(1.0, m.norm());
}

/// Left inverse of chi: reads A from the top-left block and B from the top-right block.
inline QMatrix chi_inv(const ComplexBlock& block, double structure_tol = -1.0) {
  const CMatrix& m = block.m;
  if (m.rows() != m.cols() || m.rows() != static_cast<Eigen::Index>(2 * block.n))
    throw UsageError("chi_inv: block must be 2n x 2n");
  if (structure_tol < 0.0) structure_tol = default_structure_tol(m);
  const double res = structure_residual(m);
  if (!(res <= structure_tol))
    throw DomainError("not in quaternionic image (structure residual " + format_double(res) + ")");
  const auto n = static_cast<Eigen::Index>(block.n);
  QMatrix out(block.n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      const cplx a = m(r, c);
      const cplx b = m(r, n + c);
      out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = {a.real(), a.imag(), b.real(), b.imag()};
    }
  }
  return out;
}

/// Projects a nearly-structured matrix onto the image of chi and maps it back.
inline QMatrix chi_inv_projected(const CMatrix& m, std::size_t n) {
  CMatrix sym = 0.5 * (m + structure_reflection(m));
  return chi_inv({std::move(sym), n}, std::numeric_limits<double>::infinity());
}

// ---------------------------------------------------------------------------
// Norms and classification

/// Operator norm sup ||Tu|| / ||u||, the largest singular value of chi(T).
inline double op_norm(const QMatrix& t) {
  if (t.dim() == 0) return 0.0;
  const CMatrix m = chi(t).m;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

/// Smallest singular value of T (as a quaternionic operator).
inline double min_singular_value(const QMatrix& t) {
  if (t.dim() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(chi(t).m);
  const auto& s = svd.singularValues();
  return s(s.size() - 1);
}

inline double default_class_tol(const QMatrix& t) { return 1e-10 * std::max(1.0, op_norm(t)); }

struct OperatorClass {
  bool selfadjoint = false;
  bool normal = false;
  bool unitary = false;
  bool positive = false;
};

/// Hermitian check of ||T - T*|| <= tol, without the eigen work done by classify.
inline bool is_selfadjoint(const QMatrix& t, double tol = -1.0) {
  if (tol < 0.0) tol = default_class_tol(t);
  return op_norm(t - adjoint(t)) <= tol;
}

inline OperatorClass classify(const QMatrix& t, double tol = -1.0) {
  if (tol < 0.0) tol = default_class_tol(t);
  const QMatrix ts = adjoint(t);
  const QMatrix tts = t * ts;
  OperatorClass cls;
  cls.selfadjoint = op_norm(t - ts) <= tol;
  cls.normal = op_norm(tts - ts * t) <= tol;
  cls.unitary = op_norm(tts - QMatrix::identity(t.dim())) <= tol;
  if (cls.selfadjoint && t.dim() > 0) {
    const CMatrix h = chi(t).m;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    cls.positive = es.eigenvalues()(0) >= -tol;
  }
  return cls;
}

/// Inverse through chi; throws DomainError when T is numerically singular.
inline QMatrix inverse(const QMatrix& t) {
  const std::size_t n = t.dim();
  const CMatrix m = chi(t).m;
  Eigen::FullPivLU<CMatrix> lu(m);
  if (!lu.isInvertible()) throw DomainError("matrix is singular");
  return chi_inv_projected(lu.inverse(), n);
}

}  // namespace qineq
