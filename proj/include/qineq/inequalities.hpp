#pragma once

// Checkers for the operator-inequality chains on selfadjoint quaternionic
// matrices. Each checker evaluates every term of a chain
//
//     t_0 <= t_1 <= ... <= t_k
//
// on one concrete instance (T, x, [m, M], f, r) and reports the verdict.
// Inner products <A x, x> of selfadjoint A are real in exact arithmetic; their
// imaginary residue is measured and a trial whose residue exceeds the
// realness tolerance is flagged invalid instead of being judged.
//
// Operator expressions such as exp(f'(T) f(T)^{-1} (T - cI)) are functions of
// T alone and are evaluated as a single scalar function through the spectral
// decomposition, never as products of separately computed matrices.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qineq/error.hpp"
#include "qineq/funcalc.hpp"
#include "qineq/qlinalg.hpp"

namespace qineq {

struct Term {
  std::string label;
  double value = 0.0;
};

struct Witness {
  std::size_t trial = 0;
  std::optional<std::uint64_t> matrix_seed;
  std::optional<std::uint64_t> vector_seed;
  std::size_t n = 0;
  double m = 0.0;
  double big_m = 0.0;
  std::optional<double> r;
  std::string function;
  // Explicit instance data; filled by the adversarial search only.
  std::vector<double> eigenvalues;
  std::vector<Quaternion> x;
};

struct ChainReport {
  std::string theorem;
  std::string chain;  // sub-chain label ("i", "ii", ...) or empty
  std::vector<Term> terms;
  double slack = std::numeric_limits<double>::infinity();
  double relative_slack = std::numeric_limits<double>::infinity();
  bool pass = false;
  bool invalid = false;
  std::optional<std::size_t> violation;  // offending pair (violation, violation + 1)
  double imag_residue = 0.0;
  Witness witness;
};

struct ChainOptions {
  double tol = 1e-9;
  double realness_tol = 1e-10;
  double unit_tol = 1e-12;
};

/// Slack and verdict of a non-decreasing chain under the hybrid tolerance
///   next - prev >= -tol * max(1, |prev|, |next|).
inline void judge_chain(ChainReport& rep, const ChainOptions& opt) {
  rep.slack = std::numeric_limits<double>::infinity();
  rep.relative_slack = std::numeric_limits<double>::infinity();
  rep.violation.reset();
  bool ok = true;
  for (const auto& t : rep.terms)
    if (!std::isfinite(t.value)) ok = false;
  for (std::size_t k = 0; k + 1 < rep.terms.size(); ++k) {
    const double prev = rep.terms[k].value, next = rep.terms[k + 1].value;
    const double scale = std::max({1.0, std::abs(prev), std::abs(next)});
    const double d = next - prev;
    rep.slack = std::min(rep.slack, d);
    rep.relative_slack = std::min(rep.relative_slack, d / scale);
    if (!(d >= -opt.tol * scale) && !rep.violation) {
      rep.violation = k;
      ok = false;
    }
  }
  rep.invalid = rep.imag_residue > opt.realness_tol;
  rep.pass = ok && !rep.invalid;
}

namespace detail {

[[noreturn]] inline void hypothesis_failed(const std::string& theorem, const std::string& what) {
  throw UsageError(theorem + ": hypothesis violated: " + what);
}

/// Shared state of one single-operator instance: validated hypotheses,
/// spectral decomposition, and the realness bookkeeping.
class Instance {
 public:
  Instance(std::string theorem, const QMatrix& t, const QVector& x, double m, double big_m, const ChainOptions& opt)
      : theorem_(std::move(theorem)), calc_(checked_calculus(theorem_, t)), x_(x), m_(m), big_m_(big_m), opt_(opt) {
    if (!(m < big_m)) hypothesis_failed(theorem_, "degenerate interval: requires m < M");
    if (x.size() != t.dim()) hypothesis_failed(theorem_, "dimension of x does not match T");
    if (std::abs(norm(x) - 1.0) > opt.unit_tol) hypothesis_failed(theorem_, "x is not a unit vector");
    const SpectralBounds b = calc_.bounds();
    const double margin = calc_.domain_margin();
    if (b.lower < m - margin || b.upper > big_m + margin)
      hypothesis_failed(theorem_, "sigma_S(T) = [" + format_double(b.lower) + ", " + format_double(b.upper) +
                                      "] is not inside [m, M] = [" + format_double(m) + ", " + format_double(big_m) +
                                      "]");
    c_ = clamp(rayleigh(t));
  }

  /// Instance whose interval is the spectral hull of T itself.
  static Instance over_spectrum(std::string theorem, const QMatrix& t, const QVector& x, const ChainOptions& opt) {
    const SpectralCalculus calc = checked_calculus(theorem, t);
    const SpectralBounds b = calc.bounds();
    double lo = b.lower, hi = b.upper;
    if (!(lo < hi)) {
      // T = cI: widen so that m < M; every term below depends on T only.
      const double pad = std::max(1.0, std::abs(lo)) * 1e-6;
      hi = lo + pad;
      lo = lo - (lo > 0.0 ? std::min(pad, 0.5 * lo) : pad);
    }
    return Instance(std::move(theorem), t, x, lo, hi, opt);
  }

  const std::string& theorem() const { return theorem_; }
  const SpectralCalculus& calc() const { return calc_; }
  double m() const { return m_; }
  double big_m() const { return big_m_; }
  /// <T x, x>, clamped into [m, M].
  double c() const { return c_; }
  std::size_t dim() const { return calc_.dim(); }

  double clamp(double v) const { return std::clamp(v, m_, big_m_); }

  /// Real part of <A x, x>; records the imaginary residue.
  double rayleigh(const QMatrix& a) {
    const Quaternion q = inner(apply(a, x_), x_);
    const double im = std::sqrt(q.imag_norm2());
    imag_residue_ = std::max(imag_residue_, im / (1.0 + std::abs(q.real())));
    return q.real();
  }

  /// <g(T) x, x> with g evaluated at eigenvalues clamped into [m, M].
  template <class G>
  double form(G&& g) {
    return rayleigh(calc_.apply_raw([&](double lambda) { return g(clamp(lambda)); }));
  }

  void require_domain(const ScalarFunction& f) const {
    if (!f.domain.contains(m_, big_m_))
      hypothesis_failed(theorem_, "[m, M] = [" + format_double(m_) + ", " + format_double(big_m_) +
                                      "] is not inside the domain " + f.domain.str() + " of " + f.id);
  }
  void require_convex(const ScalarFunction& f) const {
    require_domain(f);
    if (!f.flags.convex) hypothesis_failed(theorem_, f.id + " is not convex");
  }
  void require_log_convex(const ScalarFunction& f) const {
    require_domain(f);
    if (!f.flags.log_convex || !f.flags.positive || !f.log_eval)
      hypothesis_failed(theorem_, f.id + " is not a positive log-convex function");
  }
  void require_differentiable(const ScalarFunction& f) const {
    if (!f.flags.differentiable || !f.deriv) hypothesis_failed(theorem_, f.id + " is not differentiable");
  }
  void require_invertible_positive() const {
    if (!(m_ > 0.0)) hypothesis_failed(theorem_, "T must be positive and invertible (m > 0)");
  }

  ChainReport finish(std::string chain, std::vector<Term> terms, const std::string& function,
                     std::optional<double> r) const {
    ChainReport rep;
    rep.theorem = theorem_;
    rep.chain = std::move(chain);
    rep.terms = std::move(terms);
    rep.imag_residue = imag_residue_;
    rep.witness.n = dim();
    rep.witness.m = m_;
    rep.witness.big_m = big_m_;
    rep.witness.r = r;
    rep.witness.function = function;
    judge_chain(rep, opt_);
    return rep;
  }

 private:
  static SpectralCalculus checked_calculus(const std::string& theorem, const QMatrix& t) {
    try {
      return SpectralCalculus(t);
    } catch (const UsageError&) {
      hypothesis_failed(theorem, "T is not selfadjoint");
    }
  }

  std::string theorem_;
  SpectralCalculus calc_;
  QVector x_;
  double m_, big_m_;
  ChainOptions opt_;
  double c_ = 0.0;
  double imag_residue_ = 0.0;
};

/// ((M - c) a + (c - m) b) / (M - m)
inline double chord(double c, double m, double big_m, double a, double b) {
  return ((big_m - c) * a + (c - m) * b) / (big_m - m);
}

/// exp(((M - t) ln f(m) + (t - m) ln f(M)) / (M - m)): the geometric interpolant of f.
inline double geometric_interpolant(double t, double m, double big_m, double log_fm, double log_fbig) {
  return std::exp(((big_m - t) * log_fm + (t - m) * log_fbig) / (big_m - m));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Convex-function chains

/// f(<Tx,x>) <= <f(T)x,x> for convex f.
inline ChainReport check_mond_pecaric(const QMatrix& t, const ScalarFunction& f, const QVector& x, double m,
                                      double big_m, const ChainOptions& opt = {}) {
  detail::Instance in("mond-pecaric", t, x, m, big_m, opt);
  in.require_convex(f);
  const double c = in.c();
  return in.finish("", {{"f(<Tx,x>)", f(c)}, {"<f(T)x,x>", in.rayleigh(in.calc().apply(f))}}, f.id, f.r);
}

/// <f(T)x,x> <= chord of f over [m, M] at <Tx,x>, for convex f.
inline ChainReport check_lah_ribaric(const QMatrix& t, const ScalarFunction& f, const QVector& x, double m,
                                     double big_m, const ChainOptions& opt = {}) {
  detail::Instance in("lah-ribaric", t, x, m, big_m, opt);
  in.require_convex(f);
  const double c = in.c();
  return in.finish("",
                   {{"<f(T)x,x>", in.rayleigh(in.calc().apply(f))},
                    {"chord(<Tx,x>)", detail::chord(c, m, big_m, f(m), f(big_m))}},
                   f.id, f.r);
}

/// Power-mean comparison of <T^r x,x> and <Tx,x>^r for positive T, by exponent regime.
inline ChainReport check_holder_mccarthy(const QMatrix& t, const QVector& x, double r,
                                         const ChainOptions& opt = {}) {
  auto in = detail::Instance::over_spectrum("holder-mccarthy", t, x, opt);
  const SpectralBounds b = in.calc().bounds();
  const double margin = in.calc().domain_margin();
  if (b.lower < -margin) detail::hypothesis_failed(in.theorem(), "T is not positive");
  if (r == 0.0 || r == 1.0 || !std::isfinite(r))
    detail::hypothesis_failed(in.theorem(), "r must satisfy r > 1, 0 < r < 1 or r < 0");
  if (r < 0.0 && !(b.lower > margin)) detail::hypothesis_failed(in.theorem(), "r < 0 requires T invertible");
  const ScalarFunction p = functions::power(r);
  const double c = std::max(in.c(), 0.0);
  const double op = in.rayleigh(in.calc().apply(p));
  const double sc = std::pow(c, r);
  std::vector<Term> terms;
  if (r > 0.0 && r < 1.0)
    terms = {{"<T^r x,x>", op}, {"<Tx,x>^r", sc}};
  else
    terms = {{"<Tx,x>^r", sc}, {"<T^r x,x>", op}};
  return in.finish(r > 1.0 ? "r>1" : (r > 0.0 ? "0<r<1" : "r<0"), std::move(terms), p.id, r);
}

// ---------------------------------------------------------------------------
// Log-convex refinements

/// f(<Tx,x>) <= exp<ln f(T)x,x> <= <f(T)x,x> for positive log-convex f.
inline ChainReport check_mondlog(const QMatrix& t, const ScalarFunction& f, const QVector& x, double m, double big_m,
                                 const ChainOptions& opt = {}) {
  detail::Instance in("mondlog", t, x, m, big_m, opt);
  in.require_log_convex(f);
  const double c = in.c();
  return in.finish("",
                   {{"f(<Tx,x>)", f(c)},
                    {"exp<ln f(T)x,x>", std::exp(in.rayleigh(in.calc().apply_log(f)))},
                    {"<f(T)x,x>", in.rayleigh(in.calc().apply(f))}},
                   f.id, f.r);
}

/// Several operators with sum_j ||x_j||^2 = 1.
inline ChainReport check_mondlog_multi(std::span<const QMatrix> ts, const ScalarFunction& f,
                                       std::span<const QVector> xs, double m, double big_m,
                                       const ChainOptions& opt = {}) {
  const std::string theorem = "mondlog-multi";
  if (ts.empty() || ts.size() != xs.size())
    detail::hypothesis_failed(theorem, "need as many vectors as operators (at least one)");
  if (!(m < big_m)) detail::hypothesis_failed(theorem, "degenerate interval: requires m < M");
  if (!f.domain.contains(m, big_m)) detail::hypothesis_failed(theorem, "[m, M] is not inside the domain of " + f.id);
  if (!f.flags.log_convex || !f.log_eval) detail::hypothesis_failed(theorem, f.id + " is not a positive log-convex function");

  double total = 0.0;
  for (const auto& x : xs) total += norm(x) * norm(x);
  if (std::abs(total - 1.0) > 1e-10) detail::hypothesis_failed(theorem, "sum of ||x_j||^2 is not 1");

  double s_t = 0.0, s_log = 0.0, s_f = 0.0, imag = 0.0;
  for (std::size_t j = 0; j < ts.size(); ++j) {
    SpectralCalculus calc(ts[j]);
    if (xs[j].size() != calc.dim()) detail::hypothesis_failed(theorem, "dimension of x_j does not match T_j");
    const SpectralBounds b = calc.bounds();
    const double margin = calc.domain_margin();
    if (b.lower < m - margin || b.upper > big_m + margin)
      detail::hypothesis_failed(theorem, "sigma_S(T_j) is not inside [m, M]");
    auto form = [&](const QMatrix& a) {
      const Quaternion q = inner(apply(a, xs[j]), xs[j]);
      imag = std::max(imag, std::sqrt(q.imag_norm2()) / (1.0 + std::abs(q.real())));
      return q.real();
    };
    s_t += form(ts[j]);
    s_log += form(calc.apply_log(f));
    s_f += form(calc.apply(f));
  }
  const double c = std::clamp(s_t, m, big_m);

  ChainReport rep;
  rep.theorem = theorem;
  rep.terms = {{"f(sum <T_j x_j,x_j>)", f(c)},
               {"exp sum <ln f(T_j) x_j,x_j>", std::exp(s_log)},
               {"sum <f(T_j) x_j,x_j>", s_f}};
  rep.imag_residue = imag;
  rep.witness.n = ts.front().dim();
  rep.witness.m = m;
  rep.witness.big_m = big_m;
  rep.witness.function = f.id;
  rep.witness.r = f.r;
  judge_chain(rep, opt);
  return rep;
}

/// <Tx,x>^r <= exp<ln(T^r)x,x> <= <T^r x,x> for positive invertible T, r < 0.
inline ChainReport check_neg_power_refinement(const QMatrix& t, const QVector& x, double r,
                                              const ChainOptions& opt = {}) {
  auto in = detail::Instance::over_spectrum("neg-power-refinement", t, x, opt);
  if (!(r < 0.0)) detail::hypothesis_failed(in.theorem(), "requires r < 0");
  if (!(in.calc().bounds().lower > in.calc().domain_margin()))
    detail::hypothesis_failed(in.theorem(), "T must be positive and invertible");
  const ScalarFunction p = functions::power(r);
  const double c = in.c();
  return in.finish("",
                   {{"<Tx,x>^r", std::pow(c, r)},
                    {"exp<ln(T^r)x,x>", std::exp(in.rayleigh(in.calc().apply_log(p)))},
                    {"<T^r x,x>", in.rayleigh(in.calc().apply(p))}},
                   p.id, r);
}

/// Two chains refining the Lah-Ribaric bound through the geometric interpolant
/// g(t) = f(m)^{(M-t)/(M-m)} f(M)^{(t-m)/(M-m)}.
inline std::vector<ChainReport> check_lah_log(const QMatrix& t, const ScalarFunction& f, const QVector& x, double m,
                                              double big_m, const ChainOptions& opt = {}) {
  detail::Instance in("lah-log", t, x, m, big_m, opt);
  in.require_log_convex(f);
  const double c = in.c();
  const double lfm = f.log(m), lfb = f.log(big_m);
  auto g = [&](double s) { return detail::geometric_interpolant(s, m, big_m, lfm, lfb); };
  const double f_op = in.rayleigh(in.calc().apply(f));
  const double g_op = in.form(g);
  return {in.finish("i",
                    {{"<f(T)x,x>", f_op},
                     {"<g(T)x,x>", g_op},
                     {"chord(<Tx,x>)", detail::chord(c, m, big_m, f(m), f(big_m))}},
                    f.id, f.r),
          in.finish("ii", {{"f(<Tx,x>)", f(c)}, {"g(<Tx,x>)", g(c)}, {"<g(T)x,x>", g_op}}, f.id, f.r)};
}

/// The Lah chains for t^r, r < 0, with base interpolant b(t) = m^{(M-t)/(M-m)} M^{(t-m)/(M-m)}.
inline std::vector<ChainReport> check_power_lah(const QMatrix& t, const QVector& x, double m, double big_m, double r,
                                                const ChainOptions& opt = {}) {
  detail::Instance in("power-lah", t, x, m, big_m, opt);
  in.require_invertible_positive();
  if (!(r < 0.0)) detail::hypothesis_failed(in.theorem(), "requires r < 0");
  const ScalarFunction p = functions::power(r);
  const double c = in.c();
  const double lm = std::log(m), lb = std::log(big_m);
  auto base_r = [&](double s) { return std::pow(detail::geometric_interpolant(s, m, big_m, lm, lb), r); };
  const double b_op = in.form(base_r);
  return {in.finish("i",
                    {{"<T^r x,x>", in.rayleigh(in.calc().apply(p))},
                     {"<b(T)^r x,x>", b_op},
                     {"chord_r(<Tx,x>)", detail::chord(c, m, big_m, std::pow(m, r), std::pow(big_m, r))}},
                    p.id, r),
          in.finish("ii", {{"<Tx,x>^r", std::pow(c, r)}, {"b(<Tx,x>)^r", base_r(c)}, {"<b(T)^r x,x>", b_op}},
                    p.id, r)};
}

enum class GapVariant { kAll, kConvex, kLogConvex };

/// Jensen gap bounds through the derivative: (i) for convex f, (ii) for positive log-convex f.
inline std::vector<ChainReport> check_jensen_gap(const QMatrix& t, const ScalarFunction& f, const QVector& x, double m,
                                                 double big_m, GapVariant variant = GapVariant::kAll,
                                                 const ChainOptions& opt = {}) {
  detail::Instance in("jensen-gap", t, x, m, big_m, opt);
  in.require_domain(f);
  in.require_differentiable(f);
  const bool want_i = variant != GapVariant::kLogConvex && f.flags.convex;
  const bool want_ii = variant != GapVariant::kConvex && f.flags.log_convex && f.flags.positive;
  if (variant == GapVariant::kConvex && !f.flags.convex) in.require_convex(f);
  if (variant == GapVariant::kLogConvex) in.require_log_convex(f);
  if (!want_i && !want_ii) detail::hypothesis_failed(in.theorem(), f.id + " is neither convex nor log-convex");

  const double c = in.c();
  std::vector<ChainReport> out;
  if (want_i) {
    const double gap = in.rayleigh(in.calc().apply(f)) - f(c);
    const double bound = in.form([&](double s) { return s * f.deriv(s); }) - c * in.form(f.deriv);
    out.push_back(in.finish("i", {{"0", 0.0}, {"<f(T)x,x> - f(<Tx,x>)", gap}, {"derivative bound", bound}}, f.id, f.r));
  }
  if (want_ii) {
    in.require_log_convex(f);
    const double ratio = std::exp(in.rayleigh(in.calc().apply_log(f)) - f.log(c));
    auto h = [&](double s) { return f.log_deriv(s); };
    const double bound = std::exp(in.form([&](double s) { return s * h(s); }) - c * in.form(h));
    out.push_back(in.finish("ii", {{"1", 1.0}, {"exp<ln f(T)x,x> / f(<Tx,x>)", ratio}, {"derivative bound", bound}},
                            f.id, f.r));
  }
  return out;
}

/// <Tx,x>^r exp<ln(T^{-r})x,x> <= exp(r(<Tx,x><T^{-1}x,x> - 1)) for r > 0.
inline ChainReport check_neg_power_gap(const QMatrix& t, const QVector& x, double r, const ChainOptions& opt = {}) {
  auto in = detail::Instance::over_spectrum("neg-power-gap", t, x, opt);
  if (!(r > 0.0)) detail::hypothesis_failed(in.theorem(), "requires r > 0");
  if (!(in.calc().bounds().lower > in.calc().domain_margin()))
    detail::hypothesis_failed(in.theorem(), "T must be positive and invertible");
  const double c = in.c();
  const double log_form = in.form([&](double s) { return -r * std::log(s); });
  const double inv_form = in.form([](double s) { return 1.0 / s; });
  return in.finish("",
                   {{"<Tx,x>^r exp<ln(T^-r)x,x>", std::exp(r * std::log(c) + log_form)},
                    {"exp(r(<Tx,x><T^-1x,x> - 1))", std::exp(r * (c * inv_form - 1.0))}},
                   "neg_power:r=" + format_double(r), r);
}

/// Multiplicative Jensen refinement and reverse for positive log-convex differentiable f.
inline ChainReport check_mult_jensen(const QMatrix& t, const ScalarFunction& f, const QVector& x, double m,
                                     double big_m, const ChainOptions& opt = {}) {
  detail::Instance in("mult-jensen", t, x, m, big_m, opt);
  in.require_log_convex(f);
  in.require_differentiable(f);
  const double c = in.c();
  const double hc = f.log_deriv(c);
  const double fc = f(c);
  return in.finish("",
                   {{"1", 1.0},
                    {"<exp(h(c)(T-cI))x,x>", in.form([&](double s) { return std::exp(hc * (s - c)); })},
                    {"<f(T)x,x> / f(c)", in.rayleigh(in.calc().apply(f)) / fc},
                    {"<exp(h(T)(T-cI))x,x>", in.form([&](double s) { return std::exp(f.log_deriv(s) * (s - c)); })}},
                   f.id, f.r);
}

/// Reverse chain bounded by exp((M - m)(f'(M)/f(M) - f'(m)/f(m)) / 4).
inline ChainReport check_gruss_type(const QMatrix& t, const ScalarFunction& f, double m, double big_m,
                                    const QVector& x, const ChainOptions& opt = {}) {
  detail::Instance in("gruss-type", t, x, m, big_m, opt);
  in.require_log_convex(f);
  in.require_differentiable(f);
  const double lfm = f.log(m), lfb = f.log(big_m);
  const double spread = f.log_deriv(big_m) - f.log_deriv(m);
  const double f_op = in.rayleigh(in.calc().apply(f));
  const double g_op = in.form([&](double s) { return detail::geometric_interpolant(s, m, big_m, lfm, lfb); });
  const double e_op = in.form([&](double s) {
    return f(s) * std::exp((big_m - s) * (s - m) / (big_m - m) * spread);
  });
  return in.finish("",
                   {{"1", 1.0},
                    {"<g(T)x,x> / <f(T)x,x>", g_op / f_op},
                    {"<f(T)exp(...)x,x> / <f(T)x,x>", e_op / f_op},
                    {"exp((M-m) spread / 4)", std::exp(0.25 * (big_m - m) * spread)}},
                   f.id, f.r);
}

// ---------------------------------------------------------------------------
// Ky Fan

/// (1 - sum p t)/(sum p t))^r <= prod ((1 - t_i)/t_i)^{r p_i}.
inline ChainReport check_kyfan_scalar(std::span<const double> t, std::span<const double> p, double r = 1.0,
                                      const ChainOptions& opt = {}) {
  const std::string theorem = "kyfan-scalar";
  if (t.empty() || t.size() != p.size()) detail::hypothesis_failed(theorem, "t and p must be non-empty and equal length");
  if (!(r > 0.0)) detail::hypothesis_failed(theorem, "requires r > 0");
  double psum = 0.0, mean = 0.0, log_prod = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(p[i] > 0.0)) detail::hypothesis_failed(theorem, "weights must be positive");
    if (!(t[i] > 0.0 && t[i] < 0.5)) detail::hypothesis_failed(theorem, "t_i must lie in (0, 1/2)");
    psum += p[i];
    mean += p[i] * t[i];
    log_prod += p[i] * (std::log1p(-t[i]) - std::log(t[i]));
  }
  if (std::abs(psum - 1.0) > 1e-12) detail::hypothesis_failed(theorem, "weights must sum to 1");

  ChainReport rep;
  rep.theorem = theorem;
  rep.terms = {{"((1 - sum p t) / sum p t)^r", std::pow((1.0 - mean) / mean, r)},
               {"prod ((1 - t_i)/t_i)^(r p_i)", std::exp(r * log_prod)}};
  rep.witness.n = t.size();
  rep.witness.m = *std::min_element(t.begin(), t.end());
  rep.witness.big_m = *std::max_element(t.begin(), t.end());
  rep.witness.r = r;
  rep.witness.function = functions::kyfan(r).id;
  judge_chain(rep, opt);
  return rep;
}

enum class KyFanExponent {
  kCorrected,  // (T - mI)/(M - m) on the f(M) factor, as in the general Lah chain
  kLiteral,    // (T - MI)/(M - m) on the f(M) factor
};

/// Operator Ky Fan chains for f(t) = ((1 - t)/t)^r on [m, M] in (0, 1/2).
/// variant 0 runs all three; 1: Mond-Pecaric form, 2: Lah form, 3: gap forms.
inline std::vector<ChainReport> check_kyfan_operator(const QMatrix& t, const QVector& x, double m, double big_m,
                                                     double r, int variant = 0,
                                                     KyFanExponent exponent = KyFanExponent::kCorrected,
                                                     const ChainOptions& opt = {}) {
  detail::Instance in("kyfan-operator", t, x, m, big_m, opt);
  if (!(r > 0.0)) detail::hypothesis_failed(in.theorem(), "requires r > 0");
  if (!(m > 0.0 && big_m < 0.5)) detail::hypothesis_failed(in.theorem(), "[m, M] must lie inside (0, 1/2)");
  if (variant < 0 || variant > 3) throw UsageError("kyfan-operator: variant must be 0..3");
  const ScalarFunction f = functions::kyfan(r);
  in.require_log_convex(f);

  const double c = in.c();
  const double fc = std::pow((1.0 - c) / c, r);
  std::vector<ChainReport> out;

  if (variant == 0 || variant == 1) {
    out.push_back(in.finish("1",
                            {{"(<(I-T)x,x> <Tx,x>^-1)^r", fc},
                             {"exp<ln((T^-1(I-T))^r)x,x>",
                              std::exp(in.form([&](double s) { return r * (std::log1p(-s) - std::log(s)); }))},
                             {"<((I-T)T^-1)^r x,x>", in.form([&](double s) { return std::pow((1.0 - s) / s, r); })}},
                            f.id, r));
  }
  if (variant == 0 || variant == 2) {
    const double a = (1.0 - m) / m, b = (1.0 - big_m) / big_m;
    auto g_op_fn = [&](double s) {
      const double eb = exponent == KyFanExponent::kCorrected ? (s - m) : (s - big_m);
      return std::pow(a, r * (big_m - s) / (big_m - m)) * std::pow(b, r * eb / (big_m - m));
    };
    const double g_op = in.form(g_op_fn);
    const double g_c = std::pow(a, r * (big_m - c) / (big_m - m)) * std::pow(b, r * (c - m) / (big_m - m));
    const std::string tag = exponent == KyFanExponent::kCorrected ? "" : "-literal";
    out.push_back(in.finish("2i" + tag,
                            {{"<((I-T)T^-1)^r x,x>", in.form([&](double s) { return std::pow((1.0 - s) / s, r); })},
                             {"<G(T)x,x>", g_op},
                             {"chord", detail::chord(c, m, big_m, std::pow(a, r), std::pow(b, r))}},
                            f.id, r));
    out.push_back(in.finish("2ii" + tag, {{"((1-c)/c)^r", fc}, {"G(c)", g_c}, {"<G(T)x,x>", g_op}}, f.id, r));
  }
  if (variant == 0 || variant == 3) {
    const double log_form = in.form([&](double s) { return r * (std::log1p(-s) - std::log(s)); });
    const double inv_both = in.form([](double s) { return 1.0 / (s * (1.0 - s)); });
    const double inv_comp = in.form([](double s) { return 1.0 / (1.0 - s); });
    out.push_back(in.finish("3a",
                            {{"1", 1.0},
                             {"exp<ln f(T)x,x> / f(c)", std::exp(log_form - r * (std::log1p(-c) - std::log(c)))},
                             {"exp(r(c<T^-1(I-T)^-1x,x> - <(I-T)^-1x,x>))", std::exp(r * (c * inv_both - inv_comp))}},
                            f.id, r));
    out.push_back(in.finish(
        "3b",
        {{"1", 1.0},
         {"<exp(r(1-c)^-1(I - c^-1 T))x,x>", in.form([&](double s) { return std::exp(r / (1.0 - c) * (1.0 - s / c)); })},
         {"<f(T)x,x> / f(c)", in.form([&](double s) { return std::pow((1.0 - s) / s, r); }) / fc},
         {"<exp(r(I-T)^-1(cT^-1 - I))x,x>", in.form([&](double s) { return std::exp(r / (1.0 - s) * (c / s - 1.0)); })}},
        f.id, r));
  }
  return out;
}

}  // namespace qineq
