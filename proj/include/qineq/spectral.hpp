#pragma once

// Spherical spectrum of quaternionic matrices.
//
// For T in B(H^n), Delta_q(T) = T^2 - T (q + conj q) + I |q|^2 and
// sigma_S(T) = { q : Delta_q(T) not invertible }. In finite dimension this is
// the spherical point spectrum: a finite union of 2-spheres
// { re + im u : u^2 = -1 }, each one carried by a conjugate eigenvalue pair
// of chi(T). The residual and continuous parts are empty.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "qineq/error.hpp"
#include "qineq/qlinalg.hpp"
#include "qineq/quaternion.hpp"
#include "qineq/report.hpp"

namespace qineq {

/// Canonical representative re + im i (im >= 0) of one eigen-sphere.
struct Sphere {
  double re = 0.0;
  double im = 0.0;
  int mult = 1;

  Quaternion representative() const { return {re, im, 0.0, 0.0}; }
  double radius() const { return std::hypot(re, im); }
};

struct SphericalSpectrum {
  std::vector<Sphere> spheres;

  bool empty() const { return spheres.empty(); }
  int total_multiplicity() const {
    int s = 0;
    for (const auto& sp : spheres) s += sp.mult;
    return s;
  }
};

struct SpectralBounds {
  double lower = 0.0;  // m_T = min sigma_S(T)
  double upper = 0.0;  // M_T = max sigma_S(T)
};

struct SpectrumOptions {
  double merge_rel = 1e-7;  // merge_tol = merge_rel * max(1, ||T||)
  double rank_rel = 1e-8;   // rank_tol  = rank_rel * max(1, ||T||^2)
  bool verify = true;
};

inline QMatrix delta(const QMatrix& t, const Quaternion& q) {
  const std::size_t n = t.dim();
  QMatrix out = t * t;
  out -= t * (2.0 * q.real());
  for (std::size_t k = 0; k < n; ++k) out(k, k) += norm2(q);
  return out;
}

namespace detail {

struct Point {
  double re, im;
};

/// Single-linkage clustering of chi eigenvalues folded to the upper half-plane.
inline SphericalSpectrum collapse_eigenvalues(const std::vector<std::complex<double>>& eig, double merge_tol) {
  const std::size_t k = eig.size();
  std::vector<Point> pts(k);
  for (std::size_t a = 0; a < k; ++a) {
    double im = std::abs(eig[a].imag());
    if (im <= merge_tol) im = 0.0;
    pts[a] = {eig[a].real(), im};
  }

  std::vector<std::size_t> parent(k);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b)
      if (std::hypot(pts[a].re - pts[b].re, pts[a].im - pts[b].im) <= merge_tol) parent[find(a)] = find(b);

  std::vector<std::size_t> count(k, 0);
  std::vector<double> sre(k, 0.0), sim(k, 0.0);
  for (std::size_t a = 0; a < k; ++a) {
    const std::size_t r = find(a);
    ++count[r];
    sre[r] += pts[a].re;
    sim[r] += pts[a].im;
  }

  SphericalSpectrum out;
  for (std::size_t r = 0; r < k; ++r) {
    if (count[r] == 0) continue;
    if (count[r] % 2 != 0)
      throw ComputationError("spectrum: unpaired chi eigenvalue near " + std::to_string(sre[r] / count[r]));
    const double c = static_cast<double>(count[r]);
    out.spheres.push_back({sre[r] / c, sim[r] / c, static_cast<int>(count[r] / 2)});
  }
  std::sort(out.spheres.begin(), out.spheres.end(), [](const Sphere& a, const Sphere& b) {
    return a.re != b.re ? a.re < b.re : a.im < b.im;
  });
  return out;
}

}  // namespace detail

/// Eigenvalues of chi(T) (2n values, conjugate pairs).
inline std::vector<std::complex<double>> chi_eigenvalues(const QMatrix& t) {
  const CMatrix m = chi(t).m;
  std::vector<std::complex<double>> eig;
  if (is_selfadjoint(t)) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ComputationError("spectrum: Hermitian eigensolver did not converge");
    for (Eigen::Index a = 0; a < es.eigenvalues().size(); ++a) eig.emplace_back(es.eigenvalues()(a), 0.0);
  } else {
    Eigen::ComplexEigenSolver<CMatrix> es(m, false);
    if (es.info() != Eigen::Success) throw ComputationError("spectrum: eigensolver did not converge");
    for (Eigen::Index a = 0; a < es.eigenvalues().size(); ++a) eig.push_back(es.eigenvalues()(a));
  }
  return eig;
}

inline SphericalSpectrum spectrum(const QMatrix& t, const SpectrumOptions& opt = {}) {
  if (t.dim() == 0) throw UsageError("spectrum: empty matrix");
  const double tn = op_norm(t);
  const double merge_tol = opt.merge_rel * std::max(1.0, tn);
  SphericalSpectrum s = detail::collapse_eigenvalues(chi_eigenvalues(t), merge_tol);

  if (opt.verify) {
    const double rank_tol = opt.rank_rel * std::max(1.0, tn * tn);
    for (const auto& sp : s.spheres) {
      const double smin = min_singular_value(delta(t, sp.representative()));
      if (!(smin <= rank_tol))
        throw ComputationError("spectrum: Delta_q(T) not singular at (" + format_double(sp.re) + ", " +
                               format_double(sp.im) + "), sigma_min = " + format_double(smin));
    }
  }
  return s;
}

/// Residual spectrum: always empty in finite dimension.
inline SphericalSpectrum residual_spectrum(const QMatrix&) { return {}; }

/// Continuous spectrum: always empty in finite dimension.
inline SphericalSpectrum continuous_spectrum(const QMatrix&) { return {}; }

inline double spectral_radius(const SphericalSpectrum& s) {
  double r = 0.0;
  for (const auto& sp : s.spheres) r = std::max(r, sp.radius());
  return r;
}

inline double spectral_radius(const QMatrix& t) { return spectral_radius(spectrum(t)); }

inline SpectralBounds bounds(const QMatrix& t) {
  if (t.dim() == 0) throw UsageError("bounds: empty matrix");
  if (!is_selfadjoint(t)) throw UsageError("bounds: operator is not selfadjoint");
  const CMatrix m = chi(t).m;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ComputationError("bounds: eigensolver did not converge");
  const auto& ev = es.eigenvalues();
  return {ev(0), ev(ev.size() - 1)};
}

// ---------------------------------------------------------------------------
// Resolvent series

/// |q|^{2n+2} a_n for the unit direction of q, i.e. sum_h u^h conj(u)^{n-h}
/// with u = q/|q|. Real in exact arithmetic; the imaginary part is returned
/// as computed.
inline std::vector<Quaternion> resolvent_coefficient_sums(const Quaternion& q, std::size_t max_n) {
  const double len = abs(q);
  if (len == 0.0) throw DomainError("resolvent: q = 0");
  const Quaternion u = q / len;
  std::vector<Quaternion> pow(max_n + 1);
  pow[0] = 1.0;
  for (std::size_t h = 1; h <= max_n; ++h) pow[h] = pow[h - 1] * u;
  std::vector<Quaternion> sums(max_n + 1);
  for (std::size_t n = 0; n <= max_n; ++n) {
    Quaternion s;
    for (std::size_t h = 0; h <= n; ++h) s += pow[h] * conj(pow[n - h]);
    sums[n] = s;
  }
  return sums;
}

/// a_n = |q|^{-2n-2} sum_{h=0}^n q^h conj(q)^{n-h}, as a quaternion.
inline Quaternion resolvent_coefficient(const Quaternion& q, std::size_t n) {
  const double len = abs(q);
  return resolvent_coefficient_sums(q, n)[n] * std::pow(len, -static_cast<double>(n) - 2.0);
}

/// sum_{n > N} (n + 1) ||T||^n / |q|^{n+2}, closed form.
inline double resolvent_tail_bound(double t_norm, double q_abs, std::size_t terms) {
  const double rho = t_norm / q_abs;
  if (rho == 0.0) return 0.0;
  const double nn = static_cast<double>(terms);
  const double tail = std::pow(rho, nn + 1.0) * ((nn + 2.0) - (nn + 1.0) * rho) / ((1.0 - rho) * (1.0 - rho));
  return tail / (q_abs * q_abs);
}

struct ResolventResult {
  QMatrix value;
  std::size_t terms = 0;         // N: highest power used
  double tail_bound = 0.0;
  double max_imag_coeff = 0.0;   // max |Im a_n| / ((n+1) |q|^{-n-2})
  double residual = 0.0;         // ||Delta_q(T) value - I||
};

inline constexpr std::size_t kMaxResolventTerms = 100000;

/// Partial sum of sum_n T^n a_n, which converges to Delta_q(T)^{-1} when |q| > ||T||.
inline ResolventResult resolvent_series(const QMatrix& t, const Quaternion& q, double rel_tol) {
  if (!(rel_tol > 0.0)) throw UsageError("resolvent_series: rel_tol must be positive");
  const double tn = op_norm(t);
  const double qa = abs(q);
  if (!(qa > tn))
    throw DomainError("outside guaranteed convergence region: |q| = " + format_double(qa) +
                      " <= ||T|| = " + format_double(tn));

  ResolventResult res;
  std::size_t big_n = 0;
  while (resolvent_tail_bound(tn, qa, big_n) > rel_tol) {
    if (++big_n > kMaxResolventTerms) throw ComputationError("resolvent_series: too many terms required");
  }
  res.terms = big_n;
  res.tail_bound = resolvent_tail_bound(tn, qa, big_n);

  const std::vector<Quaternion> sums = resolvent_coefficient_sums(q, big_n);
  const std::size_t n = t.dim();
  QMatrix power = QMatrix::identity(n);
  QMatrix acc(n);
  for (std::size_t k = 0; k <= big_n; ++k) {
    const double scale = std::pow(qa, -static_cast<double>(k) - 2.0);
    const double imag = std::sqrt(sums[k].imag_norm2()) / static_cast<double>(k + 1);
    res.max_imag_coeff = std::max(res.max_imag_coeff, imag);
    acc += power * (sums[k].real() * scale);
    if (k < big_n) power = power * t;
  }
  res.value = std::move(acc);

  const QMatrix d = delta(t, q);
  res.residual = op_norm(d * res.value - QMatrix::identity(n));
  const double dn = op_norm(d);
  const double roundoff = 64.0 * static_cast<double>(big_n + n) * std::numeric_limits<double>::epsilon() * dn *
                          op_norm(res.value);
  if (!(res.residual <= 10.0 * rel_tol * std::max(1.0, dn) + roundoff))
    throw ComputationError("resolvent_series: residual " + format_double(res.residual) + " exceeds bound");
  return res;
}

// ---------------------------------------------------------------------------
// Spectrum algebra: sigma(ST) u {0} = sigma(TS) u {0}, r(ST) = r(TS), and
// sigma(S+T) in sigma(S) + sigma(T) for commuting selfadjoint pairs.

namespace detail {

inline double hausdorff(const std::vector<Point>& a, const std::vector<Point>& b) {
  auto one_side = [](const std::vector<Point>& x, const std::vector<Point>& y) {
    double worst = 0.0;
    for (const auto& p : x) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : y) best = std::min(best, std::hypot(p.re - q.re, p.im - q.im));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_side(a, b), one_side(b, a));
}

inline std::vector<Point> with_zero(const SphericalSpectrum& s) {
  std::vector<Point> pts{{0.0, 0.0}};
  for (const auto& sp : s.spheres) pts.push_back({sp.re, sp.im});
  return pts;
}

}  // namespace detail

inline double spectrum_hausdorff(const SphericalSpectrum& a, const SphericalSpectrum& b) {
  std::vector<detail::Point> pa, pb;
  for (const auto& sp : a.spheres) pa.push_back({sp.re, sp.im});
  for (const auto& sp : b.spheres) pb.push_back({sp.re, sp.im});
  return detail::hausdorff(pa, pb);
}

inline CheckReport spectrum_algebra_checks(const QMatrix& s, const QMatrix& t, bool check_sum = false) {
  if (s.dim() != t.dim()) throw UsageError("spectrum_algebra_checks: dimension mismatch");
  const double ns = op_norm(s), nt = op_norm(t);
  const double scale = std::max(1.0, ns * nt);

  CheckReport rep{"spectrum-algebra", {}};
  const QMatrix st = s * t;
  const QMatrix ts = t * s;
  const SphericalSpectrum sst = spectrum(st);
  const SphericalSpectrum sts = spectrum(ts);
  rep.add("hausdorff(sigma(ST)+0, sigma(TS)+0)", detail::hausdorff(detail::with_zero(sst), detail::with_zero(sts)),
          1e-8 * scale);
  rep.add("|r(ST) - r(TS)|", std::abs(spectral_radius(sst) - spectral_radius(sts)), 1e-9 * scale);

  if (check_sum) {
    if (op_norm(st - ts) > 1e-10 * scale) throw UsageError("spectrum_algebra_checks: S and T do not commute");
    if (!is_selfadjoint(s) || !is_selfadjoint(t))
      throw UsageError("spectrum_algebra_checks: sum containment is checked for selfadjoint pairs only");
    const SphericalSpectrum ss = spectrum(s), stt = spectrum(t), ssum = spectrum(s + t);
    double worst = 0.0;
    for (const auto& p : ssum.spheres) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& a : ss.spheres)
        for (const auto& b : stt.spheres) best = std::min(best, std::abs(p.re - (a.re + b.re)) + p.im);
      worst = std::max(worst, best);
    }
    rep.add("dist(sigma(S+T), sigma(S)+sigma(T))", worst, 1e-8 * std::max(1.0, ns + nt));
  }
  return rep;
}

}  // namespace qineq
