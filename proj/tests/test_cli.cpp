#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "qineq/cli.hpp"

using namespace qineq;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "qineq");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string sample(const std::string& name) { return std::string(QINEQ_SAMPLES_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("qineq_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

std::vector<Json> lines(const std::string& text) {
  std::vector<Json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(parse_json(line));
  return out;
}

}  // namespace

TEST(CliVerify, ThousandTrialMondlogCampaign) {
  const CliResult r = run({"verify", "--theorem", "mondlog", "--dim", "4", "--trials", "1000", "--seed", "42", "--spectrum",
                     "1,4", "--function", "power:r=-1", "--tol", "1e-9", "--format", "json"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto js = lines(r.out);
  ASSERT_EQ(js.size(), 1001u);
  const Json& sum = js.back()["summary"];
  EXPECT_EQ(sum["pass_count"].get<int>(), 1000);
  EXPECT_EQ(sum["invalid_count"].get<int>(), 0);
  EXPECT_TRUE(sum.contains("min_slack"));
  for (std::size_t k = 0; k < 1000; ++k) {
    EXPECT_EQ(js[k]["witness"]["trial"].get<std::size_t>(), k);
    EXPECT_EQ(js[k]["witness"]["n"].get<int>(), 4);
  }
}

TEST(CliVerify, UsageAndDomainErrors) {
  EXPECT_EQ(run({"verify", "--theorem", "kyfan-operator", "--spectrum", "0.2,0.6"}).code, 2);
  const CliResult degenerate =
      run({"verify", "--theorem", "holder-mccarthy", "--dim", "1", "--trials", "1", "--seed", "7", "--spectrum", "2,2"});
  EXPECT_EQ(degenerate.code, 2);
  EXPECT_NE(degenerate.err.find("degenerate interval"), std::string::npos);
  EXPECT_EQ(run({"verify", "--theorem", "bogus"}).code, 2);
  EXPECT_EQ(run({"verify", "--theorem", "mondlog", "--function", "bogus"}).code, 2);
  EXPECT_EQ(run({"verify", "--theorem", "mondlog", "--trials", "0"}).code, 2);
  EXPECT_EQ(run({"verify", "--theorem", "mondlog", "--dim", "0"}).code, 2);
  EXPECT_EQ(run({"verify", "--theorem", "mondlog", "--spectrum", "1"}).code, 2);
  EXPECT_EQ(run({"verify", "--theorem", "mondlog", "--format", "xml"}).code, 2);
  // hypothesis violation: square is not log-convex
  EXPECT_EQ(run({"verify", "--theorem", "mondlog", "--function", "square"}).code, 2);
  // function domain excludes the interval
  EXPECT_EQ(run({"verify", "--theorem", "mondlog", "--function", "power:r=-1", "--spectrum", "-1,2"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(CliVerify, LiteralKyFanExponentReportsViolation) {
  const CliResult r = run({"verify", "--theorem", "kyfan-operator", "--dim", "2", "--trials", "20", "--seed", "1",
                     "--literal-exponent"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("2i-literal"), std::string::npos);
  EXPECT_EQ(run({"verify", "--theorem", "kyfan-operator", "--dim", "2", "--trials", "20", "--seed", "1"}).code, 0);
}

TEST(CliVerify, TextFormatAndOutputFile) {
  const auto path = (std::filesystem::temp_directory_path() / "qineq_test_out.txt").string();
  const CliResult r = run({"verify", "--theorem", "neg-power-gap", "--trials", "3", "--format", "text", "--output", path});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str().rfind("PASS neg-power-gap", 0), 0u);
  EXPECT_NE(ss.str().find("summary neg-power-gap: 3 pass"), std::string::npos);
}

TEST(CliVerify, ToleranceEnvironmentOverride) {
  ::setenv("QINEQ_TOL", "1e-3", 1);
  EXPECT_EQ(cli::resolve_tol(std::nullopt), 1e-3);
  EXPECT_EQ(cli::resolve_tol(1e-7), 1e-7);
  ::setenv("QINEQ_TOL", "nope", 1);
  EXPECT_THROW(cli::resolve_tol(std::nullopt), UsageError);
  EXPECT_EQ(run({"verify", "--theorem", "mondlog"}).code, 2);
  ::unsetenv("QINEQ_TOL");
  EXPECT_EQ(cli::resolve_tol(std::nullopt), 1e-9);
}

TEST(CliVerify, Deterministic) {
  const std::vector<std::string> args{"verify", "--theorem", "jensen-gap", "--trials", "40", "--seed", "9"};
  const CliResult a = run(args), b = run(args);
  EXPECT_EQ(a.out, b.out);
  const CliResult c = run({"verify", "--theorem", "jensen-gap", "--trials", "40", "--seed", "10"});
  EXPECT_NE(a.out, c.out);
}

TEST(CliSpectrum, Examples) {
  const CliResult d = run({"spectrum", sample("diag14.json")});
  EXPECT_EQ(d.code, 0);
  EXPECT_EQ(d.out.rfind(R"({"spheres":[{"re":1,"im":0,"mult":1},{"re":4,"im":0,"mult":1}])", 0), 0u) << d.out;
  const Json dj = parse_json(d.out);
  EXPECT_EQ(dj["radius"].get<double>(), 4.0);
  EXPECT_EQ(dj["m_T"].get<double>(), 1.0);
  EXPECT_EQ(dj["M_T"].get<double>(), 4.0);

  const Json jj = parse_json(run({"spectrum", sample("j.json")}).out);
  ASSERT_EQ(jj["spheres"].size(), 1u);
  EXPECT_NEAR(jj["spheres"][0]["re"].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(jj["spheres"][0]["im"].get<double>(), 1.0, 1e-12);
  EXPECT_FALSE(jj.contains("m_T"));

  const Json hj = parse_json(run({"spectrum", "--input", sample("h2j.json")}).out);
  EXPECT_NEAR(hj["m_T"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(hj["M_T"].get<double>(), 3.0, 1e-12);

  EXPECT_EQ(run({"spectrum", sample("diag14.json"), "--format", "text"}).code, 0);
}

TEST(CliSpectrum, InputErrors) {
  const CliResult short_entry = run({"spectrum", temp_file("short.json", R"({"n":1,"entries":[[[1,0,0]]]})")});
  EXPECT_EQ(short_entry.code, 2);
  const CliResult syntax = run({"spectrum", temp_file("syntax.json", "{\"n\":1,\n \"entries\": [[[1,0,0,0]]\n")});
  EXPECT_EQ(syntax.code, 2);
  EXPECT_NE(syntax.err.find("line 3"), std::string::npos) << syntax.err;
  EXPECT_EQ(run({"spectrum", temp_file("rows.json", R"({"n":2,"entries":[[[1,0,0,0]]]})")}).code, 2);
  EXPECT_EQ(run({"spectrum", temp_file("n0.json", R"({"n":0,"entries":[]})")}).code, 2);
  EXPECT_EQ(run({"spectrum", temp_file("str.json", R"({"n":1,"entries":[[["a",0,0,0]]]})")}).code, 2);
  EXPECT_EQ(run({"spectrum", "/nonexistent/file.json"}).code, 2);
}

TEST(CliResolvent, Examples) {
  const CliResult z = run({"resolvent", sample("zero2.json"), "--q", "3,0,0,0"});
  ASSERT_EQ(z.code, 0) << z.err;
  const Json zj = parse_json(z.out);
  EXPECT_EQ(zj["terms"].get<int>(), 0);
  const QMatrix zr = matrix_from_json(zj["result"]);
  EXPECT_LE(op_norm(zr - QMatrix::identity(2) * (1.0 / 9.0)), 1e-16);

  const CliResult one = run({"resolvent", sample("one.json"), "--q", "3,0,0,0"});
  ASSERT_EQ(one.code, 0);
  const Json oj = parse_json(one.out);
  EXPECT_NEAR(matrix_from_json(oj["result"])(0, 0).x0, 0.25, 1e-12);
  EXPECT_LE(oj["residual"].get<double>(), 1e-10);
  EXPECT_LE(oj["direct_relative_error"].get<double>(), 1e-12);

  const CliResult bad = run({"resolvent", sample("one.json"), "--q", "0.5,0,0,0"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("|q| = 0.5"), std::string::npos) << bad.err;
  EXPECT_NE(bad.err.find("||T|| = 1"), std::string::npos) << bad.err;
  EXPECT_EQ(run({"resolvent", sample("one.json"), "--q", "3,0,0"}).code, 2);
  EXPECT_EQ(run({"resolvent", sample("one.json")}).code, 2);
}

TEST(CliSearch, BudgetZeroMatchesSingleVerifyTrial) {
  for (const char* th : {"holder-mccarthy", "mondlog", "spectrum-algebra"}) {
    const CliResult s = run({"search", "--theorem", th, "--budget", "0", "--seed", "5"});
    const CliResult v = run({"verify", "--theorem", th, "--trials", "1", "--seed", "5"});
    ASSERT_EQ(s.code, 0) << th;
    const Json sj = parse_json(s.out);
    const auto vj = lines(v.out);
    // the reported worst chain must be one of the chains verify produced, with identical terms
    bool found = false;
    for (std::size_t k = 0; k + 1 < vj.size(); ++k)
      found = found || (vj[k]["terms"] == sj["worst"]["terms"] && vj[k]["slack"] == sj["worst"]["slack"]);
    EXPECT_TRUE(found) << th;
    EXPECT_EQ(sj["evaluations"].get<int>(), 1);
  }
}

TEST(CliSearch, ConvergesToEqualityCases) {
  const CliResult m = run({"search", "--theorem", "mondlog", "--function", "exp", "--dim", "3", "--spectrum", "0,2",
                     "--budget", "1500", "--seed", "3"});
  ASSERT_EQ(m.code, 0);
  EXPECT_LE(std::abs(parse_json(m.out)["min_relative_slack"].get<double>()), 1e-8);
  const CliResult l = run({"search", "--theorem", "lah-ribaric", "--function", "exp", "--dim", "3", "--spectrum", "0,2",
                     "--budget", "1500", "--seed", "3"});
  ASSERT_EQ(l.code, 0);
  const Json lj = parse_json(l.out);
  EXPECT_LE(std::abs(lj["min_relative_slack"].get<double>()), 1e-8);
  EXPECT_FALSE(lj["suspected_violation"].get<bool>());
}

TEST(CliGenerate, RoundTripsThroughSpectrum) {
  const CliResult g = run({"generate", "--dim", "3", "--seed", "4", "--spectrum", "0.5,2"});
  ASSERT_EQ(g.code, 0);
  const QMatrix t = matrix_from_json(parse_json(g.out));
  EXPECT_EQ(t, random_selfadjoint(3, 0.5, 2.0, 4));
  const CliResult s = run({"spectrum", temp_file("gen.json", g.out)});
  const Json sj = parse_json(s.out);
  EXPECT_NEAR(sj["m_T"].get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(sj["M_T"].get<double>(), 2.0, 1e-12);
  EXPECT_EQ(run({"generate", "--spectrum", "2,1"}).code, 2);
}

TEST(Io, ShortestRoundTripFormatting) {
  Json j;
  j["a"] = 0.1;
  j["b"] = 1.0;
  j["c"] = 1e-300;
  j["d"] = std::numeric_limits<double>::infinity();
  j["e"] = 2.5e20;
  EXPECT_EQ(dump(j), R"({"a":0.1,"b":1,"c":1e-300,"d":null,"e":2.5e+20})");
  Rng rng(1);
  for (int k = 0; k < 1000; ++k) {
    const double v = uniform(rng, -1, 1) * std::pow(10.0, uniform(rng, -30, 30));
    EXPECT_EQ(parse_json(dump(Json(v))).get<double>(), v);
  }
}

TEST(Io, MatrixAndVectorRoundTrip) {
  const QMatrix t = random_matrix(3, std::uint64_t{12});
  EXPECT_EQ(matrix_from_json(parse_json(dump(to_json(t)))), t);
  const QVector x = random_unit_vector(4, std::uint64_t{3});
  EXPECT_EQ(vector_from_json(parse_json(dump(to_json(x)))), x);
  EXPECT_THROW(vector_from_json(parse_json(R"({"n":2,"entries":[[1,0,0,0]]})")), UsageError);
  EXPECT_THROW(matrix_from_json(parse_json("[1,2]")), UsageError);
}

TEST(Campaign, TrialsAreReproducibleInIsolation) {
  RunConfig cfg;
  cfg.theorem = "lah-log";
  cfg.seed = 77;
  cfg.trials = 30;
  std::vector<ChainReport> all;
  run_campaign(cfg, [&](const ChainReport& r) { all.push_back(r); });
  const auto again = run_trial(cfg, 17);
  std::size_t idx = 0;
  while (all[idx].witness.trial != 17) ++idx;
  ASSERT_EQ(again.size(), 2u);
  EXPECT_EQ(dump(to_json(again[0])), dump(to_json(all[idx])));
}

TEST(Campaign, EveryTheoremPassesASmallCampaign) {
  for (const auto& id : theorem_ids()) {
    RunConfig cfg;
    cfg.theorem = id;
    cfg.seed = 2024;
    cfg.trials = 25;
    const Summary s = run_campaign(cfg);
    EXPECT_TRUE(s.all_pass()) << id;
    EXPECT_EQ(s.invalid_count, 0u) << id;
    EXPECT_EQ(s.trials, 25u);
  }
  EXPECT_EQ(theorem_ids().size(), 16u);
  EXPECT_EQ(inequality_theorem_ids().size(), 14u);
}

TEST(Campaign, DimensionsAndFunctionsVary) {
  RunConfig cfg;
  cfg.theorem = "mond-pecaric";
  cfg.seed = 1;
  std::set<std::size_t> dims;
  std::set<std::string> fns;
  for (std::size_t k = 0; k < 200; ++k) {
    const auto in = make_instance(cfg, k);
    dims.insert(in.n);
    fns.insert(in.f->id.substr(0, in.f->id.find(':')));
    EXPECT_TRUE(in.f->flags.convex);
    EXPECT_TRUE(in.f->domain.contains(in.m, in.big_m));
  }
  EXPECT_EQ(dims, (std::set<std::size_t>{1, 2, 4, 8}));
  EXPECT_GE(fns.size(), 5u);
}
