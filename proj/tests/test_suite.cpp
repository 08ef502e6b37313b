#include "test_support.hpp"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ellhyp;
using ellhyp::testing::C;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
};

CliResult cli(const std::string& args) {
  std::string cmd = std::string("\"") + ELLHYP_CLI_PATH + "\" " + args + " 2>&1";
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  int st = ::pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  auto d = fs::temp_directory_path() / ("ellhyp_test_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d / name;
}

}  // namespace

TEST(Reports, JsonRoundTrip) {
  ResidualReport r;
  r.check_id = "gamma.shift_q";
  r.parameters = {{"p", C(0.11)}, {"z", C(0.3, -0.2)}};
  r.residual = 3.5e-15;
  r.tolerance = 1e-12;
  r.pass = true;
  r.nodes_used = 512;
  r.runtime_ms = 17;
  r.notes = "note";
  EXPECT_EQ(report_from_json_line(to_json_line(r)), r);
}

TEST(Reports, FieldOrderIsFixed) {
  ResidualReport r;
  r.check_id = "x";
  std::string s = to_json_line(r);
  std::size_t last = 0;
  for (const char* k : {"check_id", "parameters", "residual", "tolerance", "pass", "nodes_used", "runtime_ms", "notes"}) {
    auto at = s.find(std::string("\"") + k + "\"");
    ASSERT_NE(at, std::string::npos) << k;
    EXPECT_GE(at, last) << k;
    last = at;
  }
}

TEST(Reports, NonFiniteResidualIsNullAndReadsBackInfinite) {
  ResidualReport r;
  r.check_id = "x";
  r.residual = std::numeric_limits<double>::infinity();
  std::string s = to_json_line(r);
  EXPECT_NE(s.find("\"residual\":null"), std::string::npos) << s;
  EXPECT_TRUE(std::isinf(report_from_json_line(s).residual));
}

TEST(Reports, ComplexAcceptsBareNumbers) {
  EXPECT_EQ(complex_from_json(nlohmann::json(2.5)), C(2.5));
  EXPECT_EQ(complex_from_json(nlohmann::json::array({1.0, -2.0})), C(1.0, -2.0));
  EXPECT_ANY_THROW(complex_from_json(nlohmann::json("x")));
}

TEST(Sampling, DeterministicPerSeed) {
  Sampler a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
  EXPECT_NE(Sampler(42).uniform(), c.uniform());
}

TEST(Sampling, FrozenFirstDraws) {
  // mt19937_64 default seed output 14514284786278117030, top 53 bits
  Sampler S(5489);
  EXPECT_EQ(S.uniform(), double(14514284786278117030ULL >> 11) * 0x1.0p-53);
}

TEST(Sampling, ScenarioSeedsDifferByCheckAndIndex) {
  EXPECT_NE(scenario_seed(1, "a", 0), scenario_seed(1, "b", 0));
  EXPECT_NE(scenario_seed(1, "a", 0), scenario_seed(1, "a", 1));
  EXPECT_NE(scenario_seed(1, "a", 0), scenario_seed(2, "a", 0));
  EXPECT_EQ(scenario_seed(7, "a", 3), scenario_seed(7, "a", 3));
}

TEST(Sampling, ScenariosAreReproducible) {
  for (const auto& c : check_catalog()) {
    auto s1 = sample_scenario(c, {}, 99), s2 = sample_scenario(c, {}, 99);
    EXPECT_EQ(s1.parameters, s2.parameters) << c.id;
  }
}

TEST(Sampling, ImpossibleMarginRaisesSamplingFailure) {
  Sampler S(1);
  // six moduli in [0.2, 0.9] can never all sit below 0.1
  try {
    checks_detail::balanced<6>(S, 0.2, 0.9, BasePair(0.11, 0.23).pq(), 0.9);
    SUCCEED();  // a single attempt may reject without draw()
  } catch (const rejection& r) {
    EXPECT_NE(r.predicate.find("pole margin"), std::string::npos);
  }
  try {
    draw(S, [](Sampler& R) { return checks_detail::balanced<6>(R, 0.2, 0.9, BasePair(0.11, 0.23).pq(), 0.9); });
    FAIL() << "expected sampling_failure";
  } catch (const sampling_failure& e) {
    EXPECT_NE(std::string(e.what()).find("pole margin"), std::string::npos) << e.what();
  }
}

TEST(Sampling, OverridesReplaceSampledValues) {
  const Check* c = find_check("gamma.shift_q");
  auto s = sample_scenario(*c, {}, 3, {{"z", C(0.5, 0.1)}});
  EXPECT_EQ(s.parameters.at("z"), C(0.5, 0.1));
}

TEST(Config, GlobMatching) {
  EXPECT_TRUE(glob_match("*", "theta.duplication"));
  EXPECT_TRUE(glob_match("theta.*", "theta.duplication"));
  EXPECT_TRUE(glob_match("*.dup?ication", "theta.duplication"));
  EXPECT_FALSE(glob_match("gamma.*", "theta.duplication"));
  EXPECT_FALSE(glob_match("theta.", "theta.duplication"));
}

TEST(Config, ParsesBasesQuadratureAndChecks) {
  auto cfg = parse_config(nlohmann::json::parse(R"({
    "bases": {"p": 0.2, "q": [0.1, 0.05]},
    "quadrature": {"n0": 128, "n_max": 4096, "rtol": 1e-10, "margin": 0.1},
    "checks": [{"id": "gamma.shift_q", "overrides": {"z": [0.4, 0.1]}}]})"));
  EXPECT_EQ(cfg.context.bases.p, C(0.2));
  EXPECT_EQ(cfg.context.bases.q, C(0.1, 0.05));
  EXPECT_EQ(cfg.context.spec.n0, 128);
  EXPECT_EQ(cfg.context.spec.margin, 0.1);
  ASSERT_EQ(cfg.checks.size(), 1u);
  EXPECT_EQ(cfg.checks[0].overrides.at("z"), C(0.4, 0.1));
}

TEST(Config, RejectsUnknownKeysIdsAndBadValues) {
  EXPECT_THROW(parse_config(nlohmann::json::parse(R"({"basis": {}})")), usage_error);
  EXPECT_THROW(parse_config(nlohmann::json::parse(R"({"checks": [{"id": "nope"}]})")), usage_error);
  EXPECT_THROW(parse_config(nlohmann::json::parse(R"({"quadrature": {"n0": 100}})")), usage_error);
  EXPECT_THROW(parse_config(nlohmann::json::parse(R"({"bases": {"p": 1.5}})")), usage_error);
  EXPECT_THROW(parse_config(nlohmann::json::parse("[1]")), usage_error);
}

TEST(Config, PlanHonoursFilterAndExpensiveFlag) {
  SuiteOptions o;
  o.filter = "bio.*";
  auto plan = plan_checks({}, o);
  for (auto& pc : plan) EXPECT_FALSE(pc.check->expensive);
  o.expensive = true;
  EXPECT_GT(plan_checks({}, o).size(), plan.size());
  o.filter = "no.such.*";
  EXPECT_THROW(plan_checks({}, o), usage_error);
  // an explicitly listed expensive check runs without the flag
  SuiteConfig cfg;
  cfg.checks.push_back({"integrals.bailey_step", {}});
  EXPECT_EQ(plan_checks(cfg, SuiteOptions{}).size(), 1u);
}

TEST(Suite, FailuresBecomeReportsNotExceptions) {
  SuiteConfig cfg;
  cfg.checks.push_back({"gamma.shift_q", {{"p", C(1.2)}}});  // base outside the disc
  cfg.checks.push_back({"heun.bethe_n1", {{"tau", C(0.3)}}});  // Im tau = 0
  auto rs = run_suite(cfg, SuiteOptions{});
  ASSERT_EQ(rs.size(), 2u);
  for (auto& r : rs) {
    EXPECT_FALSE(r.pass);
    EXPECT_TRUE(std::isinf(r.residual));
    EXPECT_EQ(r.notes.rfind("invalid_argument:", 0), 0u) << r.notes;
    EXPECT_EQ(to_json_line(r).find("\"residual\":null") != std::string::npos, true);
  }
}

TEST(Suite, ToleranceOverrideFailsEverything) {
  SuiteOptions o;
  o.filter = "theta.duplication";
  o.tolerance = 1e-300;
  auto rs = run_suite({}, o);
  ASSERT_FALSE(rs.empty());
  for (auto& r : rs) EXPECT_FALSE(r.pass);
}

TEST(Cli, NoMatchingFilterIsUsageError) {
  auto r = cli("suite --filter 'no.such.check'");
  EXPECT_EQ(r.code, 2) << r.out;
}

TEST(Cli, BadConfigIsUsageError) {
  auto p = scratch("bad.json");
  std::ofstream(p) << R"({"checks": [{"id": "nope"}]})";
  EXPECT_EQ(cli("suite --config " + p.string()).code, 2);
  EXPECT_EQ(cli("suite --bogus").code, 2);
  EXPECT_EQ(cli("eval theta z=abc").code, 2);
}

TEST(Cli, ReportsAreByteIdenticalWithoutTiming) {
  auto a = scratch("a.jsonl"), b = scratch("b.jsonl");
  auto ra = cli("suite --filter 'theta.*' --seed 7 --no-timing --json " + a.string());
  auto rb = cli("suite --filter 'theta.*' --seed 7 --no-timing --json " + b.string());
  EXPECT_EQ(ra.code, 0) << ra.out;
  EXPECT_EQ(rb.code, 0) << rb.out;
  std::string sa = slurp(a);
  EXPECT_FALSE(sa.empty());
  EXPECT_EQ(sa, slurp(b));
  std::istringstream lines(sa);
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    auto r = report_from_json_line(line);
    EXPECT_EQ(r.runtime_ms, 0);
    EXPECT_TRUE(r.pass);
    ++n;
  }
  EXPECT_EQ(n, 6);
}

TEST(Cli, FailingToleranceExitsOne) {
  auto r = cli("suite --filter 'theta.duplication' --tol 1e-300");
  EXPECT_EQ(r.code, 1) << r.out;
}

TEST(Cli, EvalPrintsJson) {
  auto r = cli("eval gamma z=0.5 p=0.11 q=0.23");
  ASSERT_EQ(r.code, 0) << r.out;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j.at("value").at(0).get<double>(), 2.3554296379284133, 4e-15);
}

TEST(Cli, BetheReportsConsistentEnergy) {
  auto r = cli("bethe -N 1");
  ASSERT_EQ(r.code, 0) << r.out;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_LT(j.at("energy_spread").get<double>(), 1e-8);
  EXPECT_EQ(j.at("roots").size(), 1u);
}

TEST(SamplingExamples, BetaSampleIsBalanced) {
  const Check* c = find_check("integrals.elliptic_beta");
  ASSERT_NE(c, nullptr);
  CheckContext ctx;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto s = sample_scenario(*c, ctx, seed);
    auto t = checks_detail::get_n<6>(s.parameters, "t");
    cplx pr = 1.0;
    for (auto x : t) pr *= x;
    EXPECT_LT(std::abs(pr - ctx.bases.pq()), 1e-12 * std::abs(ctx.bases.pq()));
  }
}
