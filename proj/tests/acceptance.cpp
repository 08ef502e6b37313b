// Acceptance run: the default suite grouped by criterion, the reproducing
// kernel under the expensive flag, a determinism rerun and the time budgets.
// One PASS/FAIL line per criterion; exit status 1 if any criterion fails.

#include <chrono>
#include <cstdio>
#include <map>

#include <ellhyp/ellhyp.hpp>

using namespace ellhyp;
using Clock = std::chrono::steady_clock;

namespace {

struct Timed {
  ResidualReport report;
  double seconds;
};

struct Group {
  std::vector<Timed> runs;
  std::vector<std::string> extra_failures;
  double total_seconds() const {
    double s = 0.0;
    for (auto& t : runs) s += t.seconds;
    return s;
  }
};

double secs(Clock::duration d) { return std::chrono::duration<double>(d).count(); }

}  // namespace

int main() {
  const char* titles[10] = {"",
                            "theta toolbox",
                            "elliptic gamma and modified gamma",
                            "elliptic beta integral",
                            "V-function symmetries",
                            "contiguous relations and the elliptic hypergeometric equation",
                            "biorthogonality core",
                            "Sklyanin algebra and modular doubles",
                            "Bethe ansatz, Heun limit, van Diejen zero modes",
                            "quadrature convergence, determinism, suite runtime"};

  SuiteConfig cfg;
  SuiteOptions opts;
  opts.timing = false;  // wall time is taken between reports instead

  std::map<int, Group> groups;
  std::vector<std::string> first_pass;
  auto t_suite = Clock::now(), t_last = t_suite;
  int invariant_total = 0, invariant_failed = 0;
  run_suite(cfg, opts, [&](const ResidualReport& r) {
    auto now = Clock::now();
    double dt = secs(now - t_last);
    t_last = now;
    first_pass.push_back(to_json_line(r));
    int k = find_check(r.check_id)->criterion;
    if (k == 0) {
      ++invariant_total;
      if (!r.pass) {
        ++invariant_failed;
        std::printf("invariant FAIL %s residual %.3e tol %.1e %s\n", r.check_id.c_str(), r.residual, r.tolerance,
                    r.notes.c_str());
      }
      return;
    }
    groups[k].runs.push_back({r, dt});
  });
  double suite_seconds = secs(Clock::now() - t_suite);

  // reproducing kernel, expensive
  {
    const Check* c = find_check("bio.reproducing");
    auto t0 = Clock::now();
    auto r = run_scenario(*c, cfg.context, scenario_seed(opts.seed, c->id, 0), {}, c->tolerance, false);
    double dt = secs(Clock::now() - t0);
    groups[6].runs.push_back({r, dt});
    if (dt >= 300.0) groups[6].extra_failures.push_back("bio.reproducing took " + std::to_string(dt) + " s");
  }

  // time budgets
  if (groups[1].total_seconds() >= 5.0)
    groups[1].extra_failures.push_back("theta checks took " + std::to_string(groups[1].total_seconds()) + " s");
  for (auto& t : groups[3].runs)
    if (t.seconds >= 1.0)
      groups[3].extra_failures.push_back("beta evaluation took " + std::to_string(t.seconds) + " s");
  if (suite_seconds >= 600.0)
    groups[9].extra_failures.push_back("default suite took " + std::to_string(suite_seconds) + " s");

  // determinism: a second run must reproduce every report byte for byte
  {
    std::vector<std::string> second;
    run_suite(cfg, opts, [&](const ResidualReport& r) { second.push_back(to_json_line(r)); });
    std::size_t diff = 0;
    for (std::size_t i = 0; i < std::min(second.size(), first_pass.size()); ++i)
      if (second[i] != first_pass[i]) ++diff;
    if (second.size() != first_pass.size() || diff)
      groups[9].extra_failures.push_back("rerun differs in " + std::to_string(diff) + " reports");
  }

  int failed = 0;
  for (int k = 1; k <= 9; ++k) {
    const Group& g = groups[k];
    int bad = 0;
    double worst = 0.0;
    std::string first_bad;
    for (auto& t : g.runs) {
      worst = std::max(worst, t.report.residual / t.report.tolerance);
      if (!t.report.pass) {
        ++bad;
        if (first_bad.empty()) first_bad = t.report.check_id + " (" + t.report.notes + ")";
      }
    }
    bool ok = !g.runs.empty() && bad == 0 && g.extra_failures.empty();
    if (!ok) ++failed;
    std::printf("criterion %d %s  %-62s %3zu reports, worst residual/tol %.2e, %.2f s\n", k, ok ? "PASS" : "FAIL",
                titles[k], g.runs.size(), worst, g.total_seconds());
    if (!first_bad.empty()) std::printf("    failing: %s\n", first_bad.c_str());
    for (auto& e : g.extra_failures) std::printf("    %s\n", e.c_str());
  }
  std::printf("default suite %.1f s; invariants outside the criteria: %d of %d passed\n", suite_seconds,
              invariant_total - invariant_failed, invariant_total);
  return failed == 0 ? 0 : 1;
}
