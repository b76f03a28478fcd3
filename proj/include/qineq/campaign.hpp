#pragma once

// Verification campaigns: seeded instance generation per theorem id, dispatch
// to the checkers, and the random-restart hill-climbing slack search.
//
// Every field of RunConfig that is left unset is drawn per trial from a
// theorem-admissible distribution, so `trials` random instances cover
// dimensions {1, 2, 4, 8}, several registry functions and intervals.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qineq/error.hpp"
#include "qineq/funcalc.hpp"
#include "qineq/inequalities.hpp"
#include "qineq/qlinalg.hpp"
#include "qineq/random.hpp"
#include "qineq/spectral.hpp"

namespace qineq {

inline const std::vector<std::string>& inequality_theorem_ids() {
  static const std::vector<std::string> ids = {
      "mond-pecaric", "lah-ribaric", "holder-mccarthy", "mondlog",    "mondlog-multi",
      "neg-power-refinement", "lah-log", "power-lah", "jensen-gap", "neg-power-gap",
      "mult-jensen", "gruss-type", "kyfan-scalar", "kyfan-operator"};
  return ids;
}

inline const std::vector<std::string>& theorem_ids() {
  static const std::vector<std::string> ids = [] {
    auto v = inequality_theorem_ids();
    v.push_back("spectrum-algebra");
    v.push_back("calculus-axioms");
    return v;
  }();
  return ids;
}

inline bool is_known_theorem(const std::string& id) {
  const auto& ids = theorem_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

struct RunConfig {
  std::string theorem;
  std::optional<std::size_t> dim;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  ChainOptions chain;
  std::optional<std::pair<double, double>> spectrum;
  std::optional<std::string> function;
  std::optional<double> r;
  KyFanExponent kyfan_exponent = KyFanExponent::kCorrected;
};

namespace campaign {

enum class Stream : std::uint64_t { kTrial = 1, kMatrix = 2, kVector = 3, kSearch = 4 };

enum class SpectrumKind { kAnyReal, kNonnegative, kPositive, kKyFan };

inline bool uses_function(const std::string& id) {
  return id == "mond-pecaric" || id == "lah-ribaric" || id == "mondlog" || id == "mondlog-multi" ||
         id == "lah-log" || id == "jensen-gap" || id == "mult-jensen" || id == "gruss-type";
}

inline bool needs_log_convex(const std::string& id) {
  return id == "mondlog" || id == "mondlog-multi" || id == "lah-log" || id == "mult-jensen" || id == "gruss-type";
}

inline SpectrumKind kind_for(const ScalarFunction& f) {
  if (std::isfinite(f.domain.hi)) return SpectrumKind::kKyFan;
  if (f.domain.lo == 0.0) return f.domain.lo_open ? SpectrumKind::kPositive : SpectrumKind::kNonnegative;
  return SpectrumKind::kAnyReal;
}

inline std::pair<double, double> draw_interval(SpectrumKind kind, Rng& rng) {
  switch (kind) {
    case SpectrumKind::kKyFan: {
      const double m = uniform(rng, 0.02, 0.35);
      return {m, m + uniform(rng, 0.01, 0.48 - m)};
    }
    case SpectrumKind::kPositive: {
      const double m = uniform(rng, 0.25, 2.0);
      return {m, m + uniform(rng, 0.1, 3.0)};
    }
    case SpectrumKind::kNonnegative: {
      const double m = uniform(rng, 0.0, 2.0);
      return {m, m + uniform(rng, 0.1, 3.0)};
    }
    case SpectrumKind::kAnyReal:
    default: {
      const double m = uniform(rng, -2.0, 1.5);
      return {m, m + uniform(rng, 0.1, 3.0)};
    }
  }
}

/// Random registry function admissible for the theorem.
inline ScalarFunction draw_function(const std::string& theorem, Rng& rng) {
  using namespace functions;
  std::vector<ScalarFunction> pool;
  pool.push_back(exp());
  pool.push_back(power(-uniform(rng, 0.1, 2.5)));
  pool.push_back(neg_power(uniform(rng, 0.1, 2.5)));
  pool.push_back(kyfan(uniform(rng, 0.25, 2.5)));
  if (!needs_log_convex(theorem)) {
    pool.push_back(square());
    pool.push_back(identity());
    pool.push_back(power(uniform(rng, 1.05, 3.5)));
  }
  const auto pick = std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng);
  return pool[pick];
}

inline std::size_t draw_dim(Rng& rng) {
  static constexpr std::array<std::size_t, 4> dims = {1, 2, 4, 8};
  return dims[std::uniform_int_distribution<std::size_t>(0, dims.size() - 1)(rng)];
}

}  // namespace campaign

/// Concrete inputs of one single-operator trial: T = U diag(eigenvalues) U*.
struct TrialInstance {
  std::string theorem;
  std::size_t trial = 0;
  std::uint64_t matrix_seed = 0;
  std::uint64_t vector_seed = 0;
  std::size_t n = 1;
  double m = 0.0;
  double big_m = 1.0;
  std::optional<ScalarFunction> f;
  std::optional<double> r;
  std::vector<double> eigenvalues;
  QMatrix unitary;
  QVector x;

  QMatrix op() const { return conjugate_diagonal(unitary, eigenvalues); }
};

inline bool is_single_operator(const std::string& id) {
  return id != "mondlog-multi" && id != "kyfan-scalar" && id != "spectrum-algebra" && id != "calculus-axioms";
}

/// Static configuration checks that do not depend on the random draws.
inline void validate(const RunConfig& cfg) {
  if (!is_known_theorem(cfg.theorem)) throw UsageError("unknown theorem id '" + cfg.theorem + "'");
  if (cfg.trials < 1) throw UsageError("trials must be >= 1");
  if (cfg.dim && (*cfg.dim < 1 || *cfg.dim > kMaxDim)) throw UsageError("dim must be in [1, 64]");
  if (!(cfg.chain.tol > 0.0)) throw UsageError("tol must be positive");
  if (cfg.spectrum) {
    const auto [m, big_m] = *cfg.spectrum;
    if (!std::isfinite(m) || !std::isfinite(big_m)) throw UsageError("spectrum bounds must be finite");
    if (!(m < big_m)) throw UsageError("degenerate interval: spectrum requires m < M");
  }
  if (cfg.function) {
    const ScalarFunction f = parse_function(*cfg.function);
    if (cfg.spectrum && !f.domain.contains(cfg.spectrum->first, cfg.spectrum->second))
      throw DomainError("spectrum [" + format_double(cfg.spectrum->first) + ", " +
                        format_double(cfg.spectrum->second) + "] is outside the domain " + f.domain.str() + " of " +
                        f.id);
  }
  if (cfg.theorem == "kyfan-operator" || cfg.theorem == "kyfan-scalar") {
    if (cfg.spectrum && !(cfg.spectrum->first >= kKyFanEpsilon && cfg.spectrum->second <= 0.5 - kKyFanEpsilon))
      throw DomainError("Ky Fan instances require [m, M] inside (0, 1/2)");
    if (cfg.r && !(*cfg.r > 0.0)) throw UsageError("Ky Fan instances require r > 0");
  }
}

/// Builds trial k of a single-operator campaign.
inline TrialInstance make_instance(const RunConfig& cfg, std::size_t k) {
  using namespace campaign;
  const std::string& id = cfg.theorem;
  Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(Stream::kTrial), k));

  TrialInstance in;
  in.theorem = id;
  in.trial = k;
  in.matrix_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(Stream::kMatrix), k);
  in.vector_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(Stream::kVector), k);
  in.n = cfg.dim ? *cfg.dim : draw_dim(rng);

  SpectrumKind kind = SpectrumKind::kAnyReal;
  if (uses_function(id)) {
    in.f = cfg.function ? parse_function(*cfg.function) : draw_function(id, rng);
    kind = kind_for(*in.f);
  } else if (id == "holder-mccarthy") {
    if (cfg.r) {
      in.r = *cfg.r;
    } else {
      const int regime = std::uniform_int_distribution<int>(0, 2)(rng);
      in.r = regime == 0 ? uniform(rng, 1.05, 3.5) : regime == 1 ? uniform(rng, 0.05, 0.95) : -uniform(rng, 0.05, 2.5);
    }
    kind = *in.r < 0.0 ? SpectrumKind::kPositive : SpectrumKind::kNonnegative;
  } else if (id == "neg-power-refinement" || id == "power-lah") {
    in.r = cfg.r ? *cfg.r : -uniform(rng, 0.1, 2.5);
    kind = SpectrumKind::kPositive;
  } else if (id == "neg-power-gap") {
    in.r = cfg.r ? *cfg.r : uniform(rng, 0.1, 2.5);
    kind = SpectrumKind::kPositive;
  } else if (id == "kyfan-operator") {
    in.r = cfg.r ? *cfg.r : uniform(rng, 0.25, 2.5);
    kind = SpectrumKind::kKyFan;
  } else {
    throw UsageError("theorem '" + id + "' is not a single-operator campaign");
  }
  if (in.f) in.r = in.f->r;

  std::tie(in.m, in.big_m) = cfg.spectrum ? *cfg.spectrum : draw_interval(kind, rng);

  Rng mrng(in.matrix_seed);
  in.eigenvalues = random_spectrum(in.n, in.m, in.big_m, mrng);
  in.unitary = random_unitary(in.n, mrng);
  in.x = random_unit_vector(in.n, in.vector_seed);
  return in;
}

/// Runs the theorem's checker(s) on a prepared instance.
inline std::vector<ChainReport> evaluate(const TrialInstance& in, const RunConfig& cfg) {
  const std::string& id = in.theorem;
  const QMatrix t = in.op();
  const ChainOptions& o = cfg.chain;
  std::vector<ChainReport> out;
  auto one = [&](ChainReport rep) { out.push_back(std::move(rep)); };
  auto many = [&](std::vector<ChainReport> reps) {
    for (auto& rep : reps) out.push_back(std::move(rep));
  };

  if (id == "mond-pecaric") one(check_mond_pecaric(t, *in.f, in.x, in.m, in.big_m, o));
  else if (id == "lah-ribaric") one(check_lah_ribaric(t, *in.f, in.x, in.m, in.big_m, o));
  else if (id == "holder-mccarthy") one(check_holder_mccarthy(t, in.x, *in.r, o));
  else if (id == "mondlog") one(check_mondlog(t, *in.f, in.x, in.m, in.big_m, o));
  else if (id == "neg-power-refinement") one(check_neg_power_refinement(t, in.x, *in.r, o));
  else if (id == "lah-log") many(check_lah_log(t, *in.f, in.x, in.m, in.big_m, o));
  else if (id == "power-lah") many(check_power_lah(t, in.x, in.m, in.big_m, *in.r, o));
  else if (id == "jensen-gap") many(check_jensen_gap(t, *in.f, in.x, in.m, in.big_m, GapVariant::kAll, o));
  else if (id == "neg-power-gap") one(check_neg_power_gap(t, in.x, *in.r, o));
  else if (id == "mult-jensen") one(check_mult_jensen(t, *in.f, in.x, in.m, in.big_m, o));
  else if (id == "gruss-type") one(check_gruss_type(t, *in.f, in.m, in.big_m, in.x, o));
  else if (id == "kyfan-operator") many(check_kyfan_operator(t, in.x, in.m, in.big_m, *in.r, 0, cfg.kyfan_exponent, o));
  else throw UsageError("theorem '" + id + "' is not a single-operator campaign");

  for (auto& rep : out) {
    rep.witness.trial = in.trial;
    rep.witness.matrix_seed = in.matrix_seed;
    rep.witness.vector_seed = in.vector_seed;
    rep.witness.m = in.m;
    rep.witness.big_m = in.big_m;
  }
  return out;
}

namespace campaign {

inline ChainReport from_check(const CheckReport& check, const CheckItem& item, const Witness& w) {
  ChainReport rep;
  rep.theorem = check.name;
  rep.chain = item.label;
  rep.terms = {{item.label, item.value}, {"limit", item.limit}};
  rep.slack = item.limit - item.value;
  rep.relative_slack = rep.slack / std::max({1.0, std::abs(item.value), std::abs(item.limit)});
  rep.pass = item.pass();
  if (!rep.pass) rep.violation = 0;
  rep.witness = w;
  return rep;
}

inline std::vector<ChainReport> spectrum_algebra_trial(const RunConfig& cfg, std::size_t k) {
  Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(Stream::kTrial), k));
  const std::size_t n = cfg.dim ? *cfg.dim : draw_dim(rng);
  const auto [m, big_m] = cfg.spectrum ? *cfg.spectrum : draw_interval(SpectrumKind::kAnyReal, rng);
  Witness w;
  w.trial = k;
  w.matrix_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(Stream::kMatrix), k);
  w.n = n;
  w.m = m;
  w.big_m = big_m;

  Rng mrng(*w.matrix_seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const QMatrix s = random_matrix(n, mrng) * scale;
  const QMatrix t = random_matrix(n, mrng) * scale;
  // Commuting selfadjoint pair: shared eigenbasis.
  const QMatrix u = random_unitary(n, mrng);
  const std::vector<double> d1 = random_spectrum(n, m, big_m, mrng);
  const std::vector<double> d2 = random_spectrum(n, m, big_m, mrng);
  const QMatrix cs = conjugate_diagonal(u, d1);
  const QMatrix ct = conjugate_diagonal(u, d2);

  std::vector<ChainReport> out;
  const CheckReport general = spectrum_algebra_checks(s, t, false);
  for (const auto& item : general.items) out.push_back(from_check(general, item, w));
  const CheckReport commuting = spectrum_algebra_checks(cs, ct, true);
  for (const auto& item : commuting.items) {
    auto rep = from_check(commuting, item, w);
    rep.chain = "commuting: " + rep.chain;
    out.push_back(std::move(rep));
  }
  return out;
}

/// Functional-calculus axioms on a random positive definite T.
inline CheckReport calculus_axioms(const QMatrix& t, Rng& rng) {
  CheckReport rep{"calculus-axioms", {}};
  const SpectralCalculus calc(t);
  const double tn = calc.norm();

  // Polynomial consistency against the explicit matrix polynomial.
  const int degree = std::uniform_int_distribution<int>(0, 4)(rng);
  std::vector<double> coeffs(static_cast<std::size_t>(degree) + 1);
  for (auto& c : coeffs) c = uniform(rng, -2.0, 2.0);
  const QMatrix fp = calc.apply(functions::polynomial(coeffs));
  QMatrix explicit_poly = QMatrix::scalar(t.dim(), coeffs.back());
  for (std::size_t k = coeffs.size() - 1; k-- > 0;) {
    explicit_poly = explicit_poly * t;
    for (std::size_t a = 0; a < t.dim(); ++a) explicit_poly(a, a) += coeffs[k];
  }
  double coeff_scale = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) coeff_scale += std::abs(coeffs[k]) * std::pow(tn, static_cast<double>(k));
  rep.add("polynomial", op_norm(fp - explicit_poly) / std::max(1.0, coeff_scale), 1e-9);

  // Homomorphism: (fg)(T) = f(T) g(T), (f+g)(T) = f(T) + g(T).
  const QMatrix fe = calc.apply(functions::exp());
  const QMatrix fs = calc.apply(functions::sqrt());
  const QMatrix fprod = calc.apply(functions::plain("exp*sqrt", [](double s) { return std::exp(s) * std::sqrt(s); },
                                                    functions::nonnegative_reals()));
  const QMatrix fsum = calc.apply(functions::plain("exp+sqrt", [](double s) { return std::exp(s) + std::sqrt(s); },
                                                   functions::nonnegative_reals()));
  const double pscale = std::max(1.0, op_norm(fe) * op_norm(fs));
  rep.add("product", op_norm(fprod - fe * fs) / pscale, 1e-10);
  rep.add("sum", op_norm(fsum - (fe + fs)) / std::max(1.0, op_norm(fe) + op_norm(fs)), 1e-10);

  // f(T) T = T f(T).
  rep.add("commutation", op_norm(fe * t - t * fe) / std::max(1.0, op_norm(fe) * tn), 1e-10);

  // Selfadjointness of f(T) and structure of chi(f(T)) before projection.
  rep.add("selfadjoint", op_norm(fe - adjoint(fe)) / std::max(1.0, op_norm(fe)), 1e-12);
  const CMatrix raw = calc.apply_complex([](double s) { return std::exp(s); });
  rep.add("structure", structure_residual(raw) / std::max(1.0, raw.norm()), 1e-11);

  // Isometry and positivity.
  for (const auto& item : fc_norm_isometry_check(t, functions::exp()).items) rep.items.push_back(item);
  for (const auto& item : fc_positivity_check(t, functions::square()).items) rep.items.push_back(item);
  const auto pairs = order_pairs();
  const auto& pair = pairs[std::uniform_int_distribution<std::size_t>(0, 2)(rng)];
  for (auto item : fc_positivity_check(t, pair.upper, &pair.lower).items) {
    item.label += " [" + pair.upper.id + " >= " + pair.lower.id + "]";
    rep.items.push_back(std::move(item));
  }

  // exp(ln T) = T.
  const QMatrix lnt = calc.apply(functions::log());
  const QMatrix back = SpectralCalculus(lnt).apply(functions::exp());
  rep.add("exp(ln T) = T", op_norm(back - t) / std::max(1.0, tn), 1e-8);
  return rep;
}

inline std::vector<ChainReport> calculus_axioms_trial(const RunConfig& cfg, std::size_t k) {
  Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(Stream::kTrial), k));
  const std::size_t n = cfg.dim ? *cfg.dim : draw_dim(rng);
  const auto [m, big_m] = cfg.spectrum ? *cfg.spectrum : draw_interval(SpectrumKind::kPositive, rng);
  if (!(m > 0.0)) throw DomainError("calculus-axioms requires a positive definite spectrum (m > 0)");
  Witness w;
  w.trial = k;
  w.matrix_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(Stream::kMatrix), k);
  w.n = n;
  w.m = m;
  w.big_m = big_m;
  const QMatrix t = random_selfadjoint(n, m, big_m, *w.matrix_seed);
  const CheckReport rep = calculus_axioms(t, rng);
  std::vector<ChainReport> out;
  for (const auto& item : rep.items) out.push_back(from_check(rep, item, w));
  return out;
}

inline std::vector<ChainReport> mondlog_multi_trial(const RunConfig& cfg, std::size_t k) {
  Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(Stream::kTrial), k));
  const std::size_t n = cfg.dim ? *cfg.dim : draw_dim(rng);
  const ScalarFunction f = cfg.function ? parse_function(*cfg.function) : draw_function("mondlog-multi", rng);
  const auto [m, big_m] = cfg.spectrum ? *cfg.spectrum : draw_interval(kind_for(f), rng);
  const std::size_t count = std::uniform_int_distribution<std::size_t>(1, 3)(rng);

  const std::uint64_t mseed = derive_seed(cfg.seed, static_cast<std::uint64_t>(Stream::kMatrix), k);
  const std::uint64_t vseed = derive_seed(cfg.seed, static_cast<std::uint64_t>(Stream::kVector), k);
  std::vector<QMatrix> ts;
  for (std::size_t j = 0; j < count; ++j) ts.push_back(random_selfadjoint(n, m, big_m, derive_seed(mseed, 0, j)));
  const QVector joint = random_unit_vector(n * count, vseed);
  std::vector<QVector> xs(count, QVector(n));
  for (std::size_t j = 0; j < count; ++j)
    for (std::size_t a = 0; a < n; ++a) xs[j][a] = joint[j * n + a];

  ChainReport rep = check_mondlog_multi(ts, f, xs, m, big_m, cfg.chain);
  rep.witness.trial = k;
  rep.witness.matrix_seed = mseed;
  rep.witness.vector_seed = vseed;
  rep.chain = "k=" + std::to_string(count);
  return {rep};
}

inline std::vector<ChainReport> kyfan_scalar_trial(const RunConfig& cfg, std::size_t k) {
  Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(Stream::kTrial), k));
  const std::size_t n = cfg.dim ? *cfg.dim : draw_dim(rng);
  const double lo = cfg.spectrum ? cfg.spectrum->first : 1e-3;
  const double hi = cfg.spectrum ? cfg.spectrum->second : 0.5 - 1e-3;
  std::vector<double> t(n), p(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = uniform(rng, lo, hi);
    p[i] = std::exponential_distribution<double>(1.0)(rng) + 1e-12;
    total += p[i];
  }
  for (auto& v : p) v /= total;
  ChainReport rep = check_kyfan_scalar(t, p, cfg.r.value_or(1.0), cfg.chain);
  rep.witness.trial = k;
  rep.witness.matrix_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(Stream::kTrial), k);
  return {rep};
}

}  // namespace campaign

/// All chains of trial k.
inline std::vector<ChainReport> run_trial(const RunConfig& cfg, std::size_t k) {
  const std::string& id = cfg.theorem;
  if (id == "spectrum-algebra") return campaign::spectrum_algebra_trial(cfg, k);
  if (id == "calculus-axioms") return campaign::calculus_axioms_trial(cfg, k);
  if (id == "mondlog-multi") return campaign::mondlog_multi_trial(cfg, k);
  if (id == "kyfan-scalar") return campaign::kyfan_scalar_trial(cfg, k);
  return evaluate(make_instance(cfg, k), cfg);
}

struct Summary {
  std::string theorem;
  std::size_t trials = 0;
  std::size_t chains = 0;
  std::size_t pass_count = 0;
  std::size_t fail_count = 0;
  std::size_t invalid_count = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  double min_relative_slack = std::numeric_limits<double>::infinity();

  void add(const ChainReport& rep) {
    ++chains;
    if (rep.invalid) {
      ++invalid_count;
      return;
    }
    rep.pass ? ++pass_count : ++fail_count;
    min_slack = std::min(min_slack, rep.slack);
    min_relative_slack = std::min(min_relative_slack, rep.relative_slack);
  }
  bool all_pass() const { return fail_count == 0; }
};

/// Runs every trial in index order; `sink` sees each report as it is produced.
template <class Sink>
Summary run_campaign(const RunConfig& cfg, Sink&& sink) {
  validate(cfg);
  Summary sum;
  sum.theorem = cfg.theorem;
  for (std::size_t k = 0; k < cfg.trials; ++k) {
    for (const auto& rep : run_trial(cfg, k)) {
      sum.add(rep);
      sink(rep);
    }
    ++sum.trials;
  }
  return sum;
}

inline Summary run_campaign(const RunConfig& cfg) {
  return run_campaign(cfg, [](const ChainReport&) {});
}

// ---------------------------------------------------------------------------
// Adversarial search

struct SearchResult {
  ChainReport worst;
  double min_relative_slack = std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
  std::size_t restarts = 0;
  bool suspected_violation = false;
};

namespace campaign {

inline double objective(const std::vector<ChainReport>& reps, std::size_t* worst_index = nullptr) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < reps.size(); ++k) {
    if (reps[k].invalid) continue;
    if (reps[k].relative_slack < best) {
      best = reps[k].relative_slack;
      if (worst_index) *worst_index = k;
    }
  }
  return best;
}

/// Moves eigenvalues, the unit vector and (when free) the exponent.
inline TrialInstance perturb(const TrialInstance& base, const RunConfig& cfg, double step, Rng& rng) {
  TrialInstance next = base;
  std::normal_distribution<double> g;
  const double width = base.big_m - base.m;
  for (auto& d : next.eigenvalues) {
    const double u = uniform(rng, 0.0, 1.0);
    if (u < 0.1) d = base.m;
    else if (u < 0.2) d = base.big_m;
    else d = std::clamp(d + step * width * g(rng), base.m, base.big_m);
  }
  for (std::size_t a = 0; a < next.x.size(); ++a) {
    next.x[a] += Quaternion(g(rng), g(rng), g(rng), g(rng)) * step;
  }
  const double len = norm(next.x);
  if (len > 1e-300) {
    for (std::size_t a = 0; a < next.x.size(); ++a) next.x[a] = next.x[a] / len;
  } else {
    next.x = base.x;
  }
  if (next.r && !cfg.r && !next.f) {
    const double r0 = *base.r;
    double r1 = r0 * std::exp(step * g(rng));
    if (base.theorem == "holder-mccarthy" && r0 > 0.0 && r0 < 1.0) r1 = std::clamp(r1, 1e-3, 1.0 - 1e-3);
    if (base.theorem == "holder-mccarthy" && r0 > 1.0) r1 = std::max(r1, 1.0 + 1e-3);
    next.r = r1;
  }
  return next;
}

}  // namespace campaign

/// Random-restart hill climbing over (T, x, r) that minimizes relative chain
/// slack. `budget` counts checker evaluations beyond the first trial.
inline SearchResult search(const RunConfig& cfg, std::size_t budget) {
  validate(cfg);
  SearchResult res;
  auto consider = [&](std::vector<ChainReport> reps, const TrialInstance* in) {
    ++res.evaluations;
    std::size_t wi = 0;
    const double obj = campaign::objective(reps, &wi);
    if (obj < res.min_relative_slack || res.worst.terms.empty()) {
      res.min_relative_slack = obj;
      res.worst = reps[wi];
      if (in) {
        res.worst.witness.eigenvalues = in->eigenvalues;
        res.worst.witness.x.assign(in->x.entries().begin(), in->x.entries().end());
        res.worst.witness.r = in->r;
      }
    }
    return obj;
  };

  if (!is_single_operator(cfg.theorem)) {
    for (std::size_t k = 0; k <= budget; ++k) consider(run_trial(cfg, k), nullptr);
  } else {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(campaign::Stream::kSearch), 0));
    TrialInstance current = make_instance(cfg, 0);
    double current_obj = consider(evaluate(current, cfg), &current);
    double step = 0.25;
    std::size_t stale = 0;
    std::size_t next_trial = 1;
    for (std::size_t e = 0; e < budget; ++e) {
      if (stale >= 40) {
        current = make_instance(cfg, next_trial++);
        current_obj = consider(evaluate(current, cfg), &current);
        step = 0.25;
        stale = 0;
        ++res.restarts;
        continue;
      }
      TrialInstance cand = campaign::perturb(current, cfg, step, rng);
      const double obj = consider(evaluate(cand, cfg), &cand);
      if (obj < current_obj) {
        current = std::move(cand);
        current_obj = obj;
        stale = 0;
        step = std::min(0.5, step * 1.5);
      } else {
        ++stale;
        step = std::max(1e-4, step * 0.8);
      }
    }
  }
  res.suspected_violation = !res.worst.pass && !res.worst.invalid;
  return res;
}

}  // namespace qineq
