#pragma once

// Continuous functional calculus f -> f(T) for selfadjoint T, and the
// registry of scalar functions used by the inequality checkers.
//
// chi(T) is Hermitian for selfadjoint T. With chi(T) = V diag(lambda) V^H,
// f(T) = chi_inv(V diag(f(lambda)) V^H). Every eigenvalue of T appears twice
// in lambda, so f(D) respects the quaternionic structure up to rounding; the
// result is projected back onto the image of chi before reading it out.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qineq/error.hpp"
#include "qineq/qlinalg.hpp"
#include "qineq/report.hpp"
#include "qineq/spectral.hpp"

namespace qineq {

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_open = true;
  bool hi_open = true;

  bool contains(double t) const {
    const bool above = lo_open ? t > lo : t >= lo;
    const bool below = hi_open ? t < hi : t <= hi;
    return above && below;
  }
  /// [a, b] is a subset of this interval.
  bool contains(double a, double b) const { return contains(a) && contains(b); }

  std::string str() const {
    return std::string(lo_open ? "(" : "[") + format_double(lo) + ", " + format_double(hi) + (hi_open ? ")" : "]");
  }
};

struct FunctionFlags {
  bool convex = false;
  bool log_convex = false;
  bool positive = false;
  bool differentiable = true;
};

struct ScalarFunction {
  std::string id;  // canonical "<id>[:r=<float>]"
  Interval domain;
  FunctionFlags flags;
  std::function<double(double)> eval;
  std::function<double(double)> deriv;
  std::function<double(double)> log_eval;  // set iff flags.positive
  std::optional<double> r;

  double operator()(double t) const { return eval(t); }
  double log(double t) const {
    if (!log_eval) throw UsageError("function " + id + " is not positive; ln f undefined");
    return log_eval(t);
  }
  /// f'/f, the logarithmic derivative.
  double log_deriv(double t) const { return deriv(t) / eval(t); }
};

inline constexpr double kKyFanEpsilon = 1e-6;

namespace functions {

inline Interval real_line() { return {}; }
inline Interval positive_reals() { return {0.0, std::numeric_limits<double>::infinity(), true, true}; }
inline Interval nonnegative_reals() { return {0.0, std::numeric_limits<double>::infinity(), false, true}; }

inline ScalarFunction identity() {
  return {"identity", real_line(), {true, false, false, true},
          [](double t) { return t; }, [](double) { return 1.0; }, {}, std::nullopt};
}

inline ScalarFunction square() {
  return {"square", real_line(), {true, false, false, true},
          [](double t) { return t * t; }, [](double t) { return 2.0 * t; }, {}, std::nullopt};
}

inline ScalarFunction exp() {
  return {"exp", real_line(), {true, true, true, true},
          [](double t) { return std::exp(t); }, [](double t) { return std::exp(t); },
          [](double t) { return t; }, std::nullopt};
}

inline ScalarFunction log() {
  return {"log", positive_reals(), {false, false, false, true},
          [](double t) { return std::log(t); }, [](double t) { return 1.0 / t; }, {}, std::nullopt};
}

/// t^r on (0, inf) for r < 0 and on [0, inf) otherwise.
inline ScalarFunction power(double r) {
  ScalarFunction f;
  f.id = "power:r=" + format_double(r);
  f.r = r;
  f.domain = r < 0.0 ? positive_reals() : nonnegative_reals();
  f.flags = {r >= 1.0 || r <= 0.0, r <= 0.0, r <= 0.0, true};
  f.eval = [r](double t) { return std::pow(t, r); };
  f.deriv = [r](double t) { return r == 0.0 ? 0.0 : r * std::pow(t, r - 1.0); };
  if (f.flags.positive) f.log_eval = [r](double t) { return r * std::log(t); };
  return f;
}

inline ScalarFunction sqrt() {
  ScalarFunction f = power(0.5);
  f.id = "sqrt";
  f.eval = [](double t) { return std::sqrt(t); };
  return f;
}

/// t^{-r}, r > 0.
inline ScalarFunction neg_power(double r) {
  if (!(r > 0.0)) throw UsageError("neg_power requires r > 0");
  ScalarFunction f = power(-r);
  f.id = "neg_power:r=" + format_double(r);
  f.r = r;
  return f;
}

/// ((1 - t)/t)^r on [eps, 1/2 - eps], r > 0.
inline ScalarFunction kyfan(double r) {
  if (!(r > 0.0)) throw UsageError("kyfan requires r > 0");
  ScalarFunction f;
  f.id = "kyfan:r=" + format_double(r);
  f.r = r;
  f.domain = {kKyFanEpsilon, 0.5 - kKyFanEpsilon, false, false};
  f.flags = {true, true, true, true};
  f.eval = [r](double t) { return std::pow((1.0 - t) / t, r); };
  f.deriv = [r](double t) { return -r * std::pow((1.0 - t) / t, r - 1.0) / (t * t); };
  f.log_eval = [r](double t) { return r * (std::log1p(-t) - std::log(t)); };
  return f;
}

/// sum_k c_k t^k, for consistency checks against explicit matrix polynomials.
inline ScalarFunction polynomial(std::vector<double> coeffs) {
  ScalarFunction f;
  f.id = "polynomial";
  f.domain = real_line();
  f.flags = {false, false, false, true};
  f.eval = [coeffs](double t) {
    double s = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) s = s * t + *it;
    return s;
  };
  f.deriv = [coeffs](double t) {
    double s = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 1;) s = s * t + static_cast<double>(k) * coeffs[k];
    return s;
  };
  return f;
}

/// Function of T with no attributes; used for composite operator expressions.
inline ScalarFunction plain(std::string id, std::function<double(double)> g, Interval domain = real_line()) {
  ScalarFunction f;
  f.id = std::move(id);
  f.domain = domain;
  f.flags = {false, false, false, false};
  f.eval = std::move(g);
  return f;
}

}  // namespace functions

/// Parses "<id>[:r=<float>]". Known ids: identity, square, sqrt, exp, log,
/// power (r required), neg_power (r > 0, default 1), kyfan (r > 0, default 1).
inline ScalarFunction parse_function(std::string_view spec) {
  std::string_view name = spec;
  std::optional<double> r;
  if (const auto colon = spec.find(':'); colon != std::string_view::npos) {
    name = spec.substr(0, colon);
    std::string_view param = spec.substr(colon + 1);
    if (param.substr(0, 2) != "r=") throw UsageError("bad function parameter in '" + std::string(spec) + "'");
    param.remove_prefix(2);
    double v = 0.0;
    const auto res = std::from_chars(param.data(), param.data() + param.size(), v);
    if (res.ec != std::errc{} || res.ptr != param.data() + param.size() || !std::isfinite(v))
      throw UsageError("bad exponent in '" + std::string(spec) + "'");
    r = v;
  }
  auto no_param = [&](ScalarFunction f) {
    if (r) throw UsageError("function '" + std::string(name) + "' takes no parameter");
    return f;
  };
  if (name == "identity") return no_param(functions::identity());
  if (name == "square") return no_param(functions::square());
  if (name == "sqrt") return no_param(functions::sqrt());
  if (name == "exp") return no_param(functions::exp());
  if (name == "log") return no_param(functions::log());
  if (name == "power") {
    if (!r) throw UsageError("power requires r");
    return functions::power(*r);
  }
  if (name == "neg_power") return functions::neg_power(r.value_or(1.0));
  if (name == "kyfan") return functions::kyfan(r.value_or(1.0));
  throw UsageError("unknown function id '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------

/// Eigendecomposition of a selfadjoint T, reusable for many f(T).
class SpectralCalculus {
 public:
  explicit SpectralCalculus(const QMatrix& t, double class_tol = -1.0) : t_(t), n_(t.dim()) {
    if (n_ == 0) throw UsageError("functional calculus: empty matrix");
    norm_ = op_norm(t);
    if (class_tol < 0.0) class_tol = 1e-10 * std::max(1.0, norm_);
    if (op_norm(t - adjoint(t)) > class_tol) throw UsageError("functional calculus: operator is not selfadjoint");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(chi(t).m);
    if (es.info() != Eigen::Success) throw ComputationError("functional calculus: eigensolver did not converge");
    values_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
    for (Eigen::Index k = 0; k < values_.size(); k += 2) spectrum_.push_back(0.5 * (values_(k) + values_(k + 1)));
  }

  const QMatrix& op() const { return t_; }
  std::size_t dim() const { return n_; }
  double norm() const { return norm_; }
  /// n eigenvalues of T, ascending, with multiplicity.
  std::span<const double> eigenvalues() const { return spectrum_; }
  SpectralBounds bounds() const { return {spectrum_.front(), spectrum_.back()}; }
  double domain_margin() const { return 1e-9 * std::max(1.0, norm_); }

  /// Eigenvalue pulled into [lo, hi] when it sits within the domain margin outside it.
  double clamp_into(double lambda, double lo, double hi) const {
    const double margin = domain_margin();
    if (lambda < lo && lambda >= lo - margin) return lo;
    if (lambda > hi && lambda <= hi + margin) return hi;
    return lambda;
  }

  /// Eigenvalue admitted by f's domain, clamped onto a closed endpoint when within margin.
  double admit(double lambda, const ScalarFunction& f) const {
    if (f.domain.contains(lambda)) return lambda;
    const double margin = domain_margin();
    if (!f.domain.lo_open && lambda < f.domain.lo && lambda >= f.domain.lo - margin) return f.domain.lo;
    if (!f.domain.hi_open && lambda > f.domain.hi && lambda <= f.domain.hi + margin) return f.domain.hi;
    throw DomainError("eigenvalue " + format_double(lambda) + " outside domain " + f.domain.str() + " of " + f.id);
  }

  /// V diag(g(lambda)) V^H, before projection onto the quaternionic image.
  template <class G>
  CMatrix apply_complex(G&& g) const {
    Eigen::VectorXd fv(values_.size());
    for (Eigen::Index k = 0; k < values_.size(); ++k) fv(k) = g(values_(k));
    return vectors_ * fv.asDiagonal() * vectors_.adjoint();
  }

  /// g(T) with g evaluated at the raw eigenvalues; no domain checks.
  template <class G>
  QMatrix apply_raw(G&& g) const {
    QMatrix out = chi_inv_projected(apply_complex(std::forward<G>(g)), n_);
    for (std::size_t r = 0; r < n_; ++r) {
      out(r, r) = out(r, r).real();
      for (std::size_t c = r + 1; c < n_; ++c) {
        const Quaternion avg = 0.5 * (out(r, c) + conj(out(c, r)));
        out(r, c) = avg;
        out(c, r) = conj(avg);
      }
    }
    return out;
  }

  QMatrix apply(const ScalarFunction& f) const {
    for (double v : spectrum_) (void)admit(v, f);
    return apply_raw([&](double lambda) { return f(admit(lambda, f)); });
  }

  /// ln f(T) for positive f.
  QMatrix apply_log(const ScalarFunction& f) const {
    for (double v : spectrum_) (void)admit(v, f);
    return apply_raw([&](double lambda) { return f.log(admit(lambda, f)); });
  }

 private:
  QMatrix t_;
  std::size_t n_;
  double norm_ = 0.0;
  Eigen::VectorXd values_;
  CMatrix vectors_;
  std::vector<double> spectrum_;
};

inline QMatrix fc_apply(const QMatrix& t, const ScalarFunction& f) { return SpectralCalculus(t).apply(f); }

/// ||f(T)|| against max |f| over the spectrum reported by the spectral module.
inline CheckReport fc_norm_isometry_check(const QMatrix& t, const ScalarFunction& f) {
  const SpectralCalculus calc(t);
  const QMatrix ft = calc.apply(f);
  const double lhs = op_norm(ft);
  double sup = 0.0;
  for (const auto& sp : spectrum(t).spheres) sup = std::max(sup, std::abs(f(calc.admit(sp.re, f))));
  CheckReport rep{"fc-isometry", {}};
  rep.add("| ||f(T)|| - max|f(sigma)| |", std::abs(lhs - sup), 1e-9 * std::max(1.0, lhs));
  return rep;
}

/// Positivity of f(T) and, when g is given, the order f(T) >= g(T) implied by f >= g on sigma_S(T).
inline CheckReport fc_positivity_check(const QMatrix& t, const ScalarFunction& f,
                                       const ScalarFunction* g = nullptr) {
  const SpectralCalculus calc(t);
  const SpectralBounds b = calc.bounds();
  for (double v : calc.eigenvalues()) {
    if (f(calc.admit(v, f)) < 0.0) throw UsageError("fc_positivity_check: f is negative on the spectrum");
  }
  CheckReport rep{"fc-positivity", {}};
  const QMatrix ft = calc.apply(f);
  const double scale = std::max(1.0, op_norm(ft));
  rep.add("-min sigma(f(T))", -bounds(ft).lower, 1e-9 * scale);

  if (g != nullptr) {
    constexpr int kSamples = 257;
    for (int s = 0; s < kSamples; ++s) {
      const double tt = b.lower + (b.upper - b.lower) * s / (kSamples - 1);
      const double u = calc.admit(tt, f), w = calc.admit(tt, *g);
      if (f(u) < (*g)(w)) throw UsageError("fc_positivity_check: f >= g fails on [m_T, M_T]");
    }
    const QMatrix diff = ft - calc.apply(*g);
    rep.add("-min sigma(f(T) - g(T))", -bounds(diff).lower, 1e-9 * std::max(scale, op_norm(diff)));
  }
  return rep;
}

/// Registry pairs (f, g) with f >= g on the stated interval.
struct OrderedPair {
  ScalarFunction upper;
  ScalarFunction lower;
  Interval where;
};

inline std::vector<OrderedPair> order_pairs() {
  using namespace functions;
  std::vector<OrderedPair> pairs;
  pairs.push_back({exp(), plain("1+t", [](double t) { return 1.0 + t; }), real_line()});
  pairs.push_back({square(), plain("2t-1", [](double t) { return 2.0 * t - 1.0; }), real_line()});
  pairs.push_back({neg_power(1.0), plain("2-t", [](double t) { return 2.0 - t; }, positive_reals()),
                   positive_reals()});
  pairs.push_back({sqrt(), plain("t/(1+t)", [](double t) { return t / (1.0 + t); }, nonnegative_reals()),
                   {0.0, 1.0, false, false}});
  return pairs;
}

}  // namespace qineq
