#pragma once

// Command-line front end. `run_cli` takes explicit streams so it can be driven
// from tests; tools/qineq.cpp is a thin main() around it.
//
// Exit codes: 0 all pass, 1 violation, 2 usage/config/domain error,
// 3 internal numerical failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qineq/campaign.hpp"
#include "qineq/error.hpp"
#include "qineq/io.hpp"
#include "qineq/spectral.hpp"

namespace qineq::cli {

enum ExitCode : int { kOk = 0, kViolation = 1, kUsage = 2, kNumerical = 3 };

inline std::vector<double> parse_number_list(const std::string& text, std::size_t expected, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError(flag + ": '" + item + "' is not a number");
    }
    if (used != item.size()) throw UsageError(flag + ": '" + item + "' is not a number");
    out.push_back(v);
  }
  if (out.size() != expected)
    throw UsageError(flag + " expects " + std::to_string(expected) + " comma-separated numbers");
  return out;
}

/// Default tolerance, overridden by QINEQ_TOL, overridden by --tol.
inline double resolve_tol(const std::optional<double>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("QINEQ_TOL"); env && *env) {
    try {
      std::size_t used = 0;
      const double v = std::stod(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("QINEQ_TOL: '") + env + "' is not a number");
  }
  return ChainOptions{}.tol;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Options {
  std::string theorem;
  std::optional<std::size_t> dim;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::optional<std::string> spectrum;
  std::optional<std::string> function;
  std::optional<double> r;
  std::optional<double> tol;
  std::string format = "json";
  std::string output;
  bool literal_exponent = false;
  std::size_t budget = 1000;
  std::string input;
  std::string q;
  double rel_tol = 1e-14;
};

inline RunConfig make_config(const Options& o) {
  RunConfig cfg;
  cfg.theorem = o.theorem;
  cfg.dim = o.dim;
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.chain.tol = resolve_tol(o.tol);
  if (o.spectrum) {
    const auto v = parse_number_list(*o.spectrum, 2, "--spectrum");
    cfg.spectrum = std::make_pair(v[0], v[1]);
  }
  cfg.function = o.function;
  cfg.r = o.r;
  cfg.kyfan_exponent = o.literal_exponent ? KyFanExponent::kLiteral : KyFanExponent::kCorrected;
  return cfg;
}

inline std::string text_line(const ChainReport& rep) {
  std::ostringstream os;
  os << (rep.invalid ? "INVALID" : rep.pass ? "PASS" : "FAIL") << ' ' << rep.theorem;
  if (!rep.chain.empty()) os << " [" << rep.chain << ']';
  os << " trial=" << rep.witness.trial << " slack=" << format_double(rep.slack) << " :";
  for (std::size_t k = 0; k < rep.terms.size(); ++k) {
    os << (k ? " <= " : " ") << format_double(rep.terms[k].value);
  }
  if (rep.violation) os << "  (violated pair " << *rep.violation << ")";
  return os.str();
}

inline Json summary_json(const Summary& s) {
  Json j;
  j["theorem"] = s.theorem;
  j["trials"] = s.trials;
  j["chains"] = s.chains;
  j["pass_count"] = s.pass_count;
  j["fail_count"] = s.fail_count;
  j["invalid_count"] = s.invalid_count;
  j["min_slack"] = s.min_slack;
  j["min_relative_slack"] = s.min_relative_slack;
  Json w;
  w["summary"] = std::move(j);
  return w;
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw UsageError("cannot open output file '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

inline int cmd_verify(const Options& o, std::ostream& out) {
  const RunConfig cfg = make_config(o);
  validate(cfg);
  Output dst(o.output, out);
  const bool json = o.format == "json";
  const Summary s = run_campaign(cfg, [&](const ChainReport& rep) {
    *dst << (json ? dump(to_json(rep)) : text_line(rep)) << '\n';
  });
  if (json) {
    *dst << dump(summary_json(s)) << '\n';
  } else {
    *dst << "summary " << s.theorem << ": " << s.pass_count << " pass, " << s.fail_count << " fail, "
         << s.invalid_count << " invalid over " << s.trials << " trials; min slack " << format_double(s.min_slack)
         << '\n';
  }
  return s.all_pass() ? kOk : kViolation;
}

inline int cmd_search(const Options& o, std::ostream& out) {
  RunConfig cfg = make_config(o);
  cfg.trials = 1;
  const SearchResult res = search(cfg, o.budget);
  Output dst(o.output, out);
  if (o.format == "json") {
    Json j;
    j["theorem"] = cfg.theorem;
    j["budget"] = o.budget;
    j["evaluations"] = res.evaluations;
    j["restarts"] = res.restarts;
    j["min_slack"] = res.worst.slack;
    j["min_relative_slack"] = res.min_relative_slack;
    j["suspected_violation"] = res.suspected_violation;
    j["worst"] = to_json(res.worst);
    *dst << dump(j) << '\n';
  } else {
    *dst << "search " << cfg.theorem << ": " << res.evaluations << " evaluations, " << res.restarts
         << " restarts\nworst: " << text_line(res.worst) << '\n';
    if (res.suspected_violation) *dst << "SUSPECTED VIOLATION\n";
  }
  return res.suspected_violation ? kViolation : kOk;
}

inline QMatrix load_matrix(const std::string& path) { return matrix_from_json(parse_json(read_file(path))); }

inline int cmd_spectrum(const Options& o, std::ostream& out) {
  const QMatrix t = load_matrix(o.input);
  const SphericalSpectrum s = spectrum(t);
  Output dst(o.output, out);
  Json j = to_json(s);
  j["radius"] = spectral_radius(s);
  j["norm"] = op_norm(t);
  if (is_selfadjoint(t)) {
    const SpectralBounds b = bounds(t);
    j["m_T"] = b.lower;
    j["M_T"] = b.upper;
  }
  if (o.format == "json") {
    *dst << dump(j) << '\n';
  } else {
    for (const auto& sp : s.spheres)
      *dst << "sphere re=" << format_double(sp.re) << " im=" << format_double(sp.im) << " mult=" << sp.mult << '\n';
    *dst << "radius " << format_double(spectral_radius(s)) << '\n';
    if (j.contains("m_T"))
      *dst << "m_T " << format_double(j["m_T"].get<double>()) << "  M_T " << format_double(j["M_T"].get<double>())
           << '\n';
  }
  return kOk;
}

inline int cmd_resolvent(const Options& o, std::ostream& out) {
  const QMatrix t = load_matrix(o.input);
  const auto v = parse_number_list(o.q, 4, "--q");
  const Quaternion q(v[0], v[1], v[2], v[3]);
  if (!(o.rel_tol > 0.0 && o.rel_tol < 1.0)) throw UsageError("--rel-tol must lie in (0, 1)");
  const ResolventResult res = resolvent_series(t, q, o.rel_tol);
  const QMatrix direct = inverse(delta(t, q));
  const double err = op_norm(res.value - direct) / std::max(op_norm(direct), 1e-300);

  Output dst(o.output, out);
  if (o.format == "json") {
    Json j;
    j["result"] = to_json(res.value);
    j["terms"] = res.terms;
    j["tail_bound"] = res.tail_bound;
    j["residual"] = res.residual;
    j["max_imag_coeff"] = res.max_imag_coeff;
    j["direct_relative_error"] = err;
    *dst << dump(j) << '\n';
  } else {
    *dst << "N " << res.terms << "\ntail_bound " << format_double(res.tail_bound) << "\nresidual "
         << format_double(res.residual) << "\ndirect_relative_error " << format_double(err) << '\n';
    for (std::size_t r = 0; r < res.value.dim(); ++r) {
      for (std::size_t c = 0; c < res.value.dim(); ++c) *dst << (c ? "  " : "") << res.value(r, c);
      *dst << '\n';
    }
  }
  return kOk;
}

/// Writes a random selfadjoint matrix with spectrum in [m, M], M and m attained when n >= 2.
inline int cmd_generate(const Options& o, std::ostream& out) {
  const std::size_t n = o.dim.value_or(2);
  if (n < 1 || n > kMaxDim) throw UsageError("dim must be in [1, 64]");
  std::pair<double, double> mm{1.0, 4.0};
  if (o.spectrum) {
    const auto v = parse_number_list(*o.spectrum, 2, "--spectrum");
    mm = {v[0], v[1]};
  }
  if (!(mm.first < mm.second)) throw UsageError("degenerate interval: spectrum requires m < M");
  const QMatrix t = random_selfadjoint(n, mm.first, mm.second, o.seed);
  Output dst(o.output, out);
  *dst << dump(to_json(t)) << '\n';
  return kOk;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical verification of operator inequalities on quaternionic Hilbert spaces", "qineq"};
  app.require_subcommand(1);
  Options o;

  auto add_run_flags = [&](CLI::App* sub) {
    sub->add_option("--theorem", o.theorem, "theorem id")->required();
    sub->add_option("--dim", o.dim, "dimension n (random from {1,2,4,8} when omitted)");
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--spectrum", o.spectrum, "spectral interval m,M");
    sub->add_option("--function", o.function, "function spec, e.g. power:r=-1");
    sub->add_option("--r", o.r, "exponent r");
    sub->add_option("--tol", o.tol, "chain tolerance (default 1e-9, env QINEQ_TOL)");
    sub->add_flag("--literal-exponent", o.literal_exponent, "Ky Fan: use the (T - MI) exponent reading");
  };
  auto add_output_flags = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--output", o.output, "output path (stdout when omitted)");
  };

  auto* verify = app.add_subcommand("verify", "run a verification campaign");
  add_run_flags(verify);
  add_output_flags(verify);
  verify->add_option("--trials", o.trials, "number of random instances");

  auto* search_cmd = app.add_subcommand("search", "adversarial minimum-slack search");
  add_run_flags(search_cmd);
  add_output_flags(search_cmd);
  search_cmd->add_option("--budget", o.budget, "number of perturbation steps");

  auto* spectrum_cmd = app.add_subcommand("spectrum", "spherical spectrum of a matrix file");
  spectrum_cmd->add_option("input,--input", o.input, "matrix JSON file")->required();
  add_output_flags(spectrum_cmd);

  auto* resolvent_cmd = app.add_subcommand("resolvent", "resolvent series of a matrix file");
  resolvent_cmd->add_option("input,--input", o.input, "matrix JSON file")->required();
  resolvent_cmd->add_option("--q", o.q, "quaternion q as x0,x1,x2,x3")->required();
  resolvent_cmd->add_option("--rel-tol", o.rel_tol, "series tail tolerance");
  add_output_flags(resolvent_cmd);

  auto* generate_cmd = app.add_subcommand("generate", "random selfadjoint matrix in the matrix JSON format");
  generate_cmd->add_option("--dim", o.dim, "dimension n");
  generate_cmd->add_option("--seed", o.seed, "seed");
  generate_cmd->add_option("--spectrum", o.spectrum, "spectral interval m,M");
  generate_cmd->add_option("--output", o.output, "output path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (o.trials < 1) throw UsageError("trials must be >= 1");
    if (*verify) return cmd_verify(o, out);
    if (*search_cmd) return cmd_search(o, out);
    if (*spectrum_cmd) return cmd_spectrum(o, out);
    if (*resolvent_cmd) return cmd_resolvent(o, out);
    if (*generate_cmd) return cmd_generate(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kUsage;
  } catch (const ComputationError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}

}  // namespace qineq::cli
