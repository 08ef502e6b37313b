// ellhyp: run the identity suite, evaluate single functions, solve Bethe
// equations and tabulate the Heun limit.

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "ellhyp/ellhyp.hpp"

using namespace ellhyp;
using nlohmann::ordered_json;

namespace {

// "re,im" or "re"
cplx parse_complex(const std::string& s) {
  auto comma = s.find(',');
  try {
    std::size_t used = 0;
    if (comma == std::string::npos) {
      double re = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return {re, 0.0};
    }
    std::string a = s.substr(0, comma), b = s.substr(comma + 1);
    double re = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(s);
    double im = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(s);
    return {re, im};
  } catch (const std::exception&) {
    throw usage_error("cannot parse complex number '" + s + "' (expected re or re,im)");
  }
}

ordered_json cj(cplx z) { return {z.real(), z.imag()}; }

struct Args {
  std::map<std::string, cplx> v;

  explicit Args(const std::vector<std::string>& kv) {
    for (const auto& s : kv) {
      auto eq = s.find('=');
      if (eq == std::string::npos || eq == 0) throw usage_error("argument '" + s + "' is not name=value");
      v[s.substr(0, eq)] = parse_complex(s.substr(eq + 1));
    }
  }
  cplx at(const std::string& k) const {
    auto it = v.find(k);
    if (it == v.end()) throw usage_error("missing argument " + k);
    return it->second;
  }
  cplx get(const std::string& k, cplx def) const {
    auto it = v.find(k);
    return it == v.end() ? def : it->second;
  }
  bool has(const std::string& k) const { return v.count(k) != 0; }
  void only(std::initializer_list<const char*> allowed) const {
    for (const auto& [k, x] : v) {
      bool ok = false;
      for (auto a : allowed) ok = ok || k == a;
      if (!ok) throw usage_error("unexpected argument " + k);
    }
  }
};

// t1..t(n-1) required, tn solved from prod t = target when absent
template <std::size_t N>
std::array<cplx, N> balanced_args(const Args& a, cplx target) {
  std::array<cplx, N> t{};
  cplx pr = 1.0;
  for (std::size_t i = 0; i + 1 < N; ++i) pr *= (t[i] = a.at("t" + std::to_string(i + 1)));
  std::string last = "t" + std::to_string(N);
  t[N - 1] = a.has(last) ? a.at(last) : target / pr;
  return t;
}

ordered_json quad_json(const QuadratureResult& r) {
  return {{"value", cj(r.value)},
          {"error_estimate", r.error_estimate},
          {"nodes_used", r.nodes_used},
          {"converged", r.converged}};
}

ordered_json eval_function(const std::string& fn, const Args& a) {
  ordered_json out{{"function", fn}};
  ordered_json args = ordered_json::object();
  for (const auto& [k, v] : a.v) args[k] = cj(v);
  out["arguments"] = args;
  auto bases = [&] { return BasePair(a.get("p", 0.11), a.get("q", 0.23)); };
  if (fn == "theta") {
    a.only({"z", "p"});
    out["value"] = cj(theta(a.at("z"), Nome(a.get("p", 0.11))));
  } else if (fn == "gamma") {
    a.only({"z", "p", "q"});
    out["value"] = cj(gamma_pq(a.at("z"), bases()));
  } else if (fn == "gamma-mod") {
    a.only({"u", "w1", "w2", "w3"});
    out["value"] = cj(modified_gamma_g(a.at("u"), OmegaTriple(a.at("w1"), a.at("w2"), a.at("w3"))));
  } else if (fn == "beta") {
    a.only({"t1", "t2", "t3", "t4", "t5", "t6", "p", "q"});
    BasePair b = bases();
    auto t = balanced_args<6>(a, b.pq());
    out["value"] = cj(elliptic_beta_closed(t, b));
    out["quadrature"] = quad_json(ihm_integral(BalancedParams(0, {t.begin(), t.end()}, b)));
  } else if (fn == "v") {
    a.only({"t1", "t2", "t3", "t4", "t5", "t6", "t7", "t8", "p", "q"});
    BasePair b = bases();
    auto r = v_quad(balanced_args<8>(a, b.pq() * b.pq()), b);
    out["value"] = cj(r.value);
    out["quadrature"] = quad_json(r);
  } else if (fn == "r-kernel") {
    a.only({"a", "b", "c", "d", "x", "w", "rho", "p", "q"});
    auto r = r_kernel(a.at("a"), a.at("b"), a.at("c"), a.at("d"), a.at("x"), a.at("w"), a.at("rho"), bases());
    out["value"] = cj(r.value);
    out["quadrature"] = quad_json(r);
  } else {
    throw usage_error("unknown function '" + fn + "' (theta|gamma|gamma-mod|beta|v|r-kernel)");
  }
  return out;
}

int run_suite_cmd(const std::string& config, const std::string& filter, std::uint64_t seed,
                  std::optional<double> tol, std::optional<int> nodes, const std::string& json_path, bool expensive,
                  bool no_timing) {
  SuiteConfig cfg = config.empty() ? SuiteConfig{} : load_config(config);
  SuiteOptions opts;
  opts.filter = filter;
  opts.seed = seed;
  opts.tolerance = tol;
  opts.nodes = nodes;
  opts.expensive = expensive;
  opts.timing = !no_timing;
  plan_checks(cfg, opts);  // usage errors before any output

  std::ofstream file;
  if (!json_path.empty()) {
    file.open(json_path);
    if (!file) throw usage_error("cannot write " + json_path);
  }
  int failed = 0, total = 0;
  run_suite(cfg, opts, [&](const ResidualReport& r) {
    ++total;
    if (!r.pass) ++failed;
    if (file.is_open()) {
      file << to_json_line(r) << '\n' << std::flush;
      std::printf("%s  %-40s residual %.3e  tol %.1e  %lld ms\n", r.pass ? "PASS" : "FAIL", r.check_id.c_str(),
                  r.residual, r.tolerance, static_cast<long long>(r.runtime_ms));
      if (!r.pass && !r.notes.empty()) std::printf("      %s\n", r.notes.c_str());
    } else {
      std::cout << to_json_line(r) << '\n';
    }
    std::fflush(stdout);
  });
  if (file.is_open()) std::printf("%d of %d reports passed\n", total - failed, total);
  return failed == 0 ? 0 : 1;
}

int run_bethe(int N, const std::string& a1, const std::string& a2, const std::string& a3, const std::string& eta_s,
              const std::string& tau_s) {
  cplx eta = parse_complex(eta_s), tau = parse_complex(tau_s);
  Quad a = BetheConfig::complete(parse_complex(a1), parse_complex(a2), parse_complex(a3), N, eta);
  BetheConfig c = N == 0 ? BetheConfig(0, a, {}, eta, tau) : bethe_solve(N, a, eta, tau);
  ordered_json out{{"N", N}, {"eta", cj(eta)}, {"tau", cj(tau)}};
  ordered_json aj = ordered_json::array(), roots = ordered_json::array(), energy = ordered_json::array();
  for (auto x : c.a) aj.push_back(cj(x));
  for (auto r : c.roots) roots.push_back(cj(r));
  for (int l = 1; l <= 4; ++l) energy.push_back(cj(bethe_energy(c, l)));
  out["a"] = aj;
  out["roots"] = roots;
  auto sys = bethe_system_residual(c);
  out["system_residual"] = sys.empty() ? 0.0 : *std::max_element(sys.begin(), sys.end());
  out["energy"] = energy;
  out["energy_spread"] = bethe_energy_spread(c);
  double dv = 0.0;
  for (cplx u : {cplx(0.13, 0.04), cplx(0.31, -0.07), cplx(0.41, 0.11), cplx(0.27, 0.17)})
    dv = std::max(dv, devp_residual(u, c));
  out["devp_residual"] = dv;
  std::cout << out.dump() << '\n';
  return 0;
}

int run_heun(const std::string& u_s, const std::string& tau_s, const std::vector<double>& alpha, bool without_l) {
  if (alpha.size() != 4) throw usage_error("--alpha takes four values");
  cplx u = parse_complex(u_s), tau = parse_complex(tau_s);
  Alpha4 al{alpha[0], alpha[1], alpha[2], alpha[3]};
  const std::vector<double> etas{0.04, 0.02, 0.01, 0.005, 0.0025};
  struct T {
    const char* name;
    std::vector<cplx> shifts;
  };
  std::printf("%-28s", "test function");
  for (std::size_t i = 0; i + 1 < etas.size(); ++i) std::printf("  eta=%-8g", etas[i + 1]);
  std::printf("\n");
  auto row = [&](const char* name, const Fn& f, const Fn& f2) {
    auto h = heun_limit_order(f, f2, u, al, tau, etas, !without_l);
    std::printf("%-28s", name);
    for (double o : h.orders) std::printf("  %-12.3f", o);
    std::printf("%s\n", h.precision_floor ? "  (rounding floor reached)" : "");
  };
  for (const T& t : {T{"theta1(u+-0.3)", {0.3, -0.3}}, T{"theta1(u+-0.2)theta1(u+0.1)", {0.2, -0.2, 0.1}}}) {
    auto s = t.shifts;
    row(t.name, [&](cplx x) { return checks_detail::jet_product(s, x, tau).f; },
        [&](cplx x) { return checks_detail::jet_product(s, x, tau).d2; });
  }
  const cplx k = 2.0 * pi * I;
  row("e^{2 pi i u}+2", [k](cplx x) { return std::exp(k * x) + 2.0; }, [k](cplx x) { return k * k * std::exp(k * x); });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elliptic hypergeometric identity suite"};
  app.require_subcommand(1);

  auto* suite = app.add_subcommand("suite", "run the registered checks, one JSON report per line");
  std::string config, filter = "*", json_path;
  std::uint64_t seed = 1;
  double tol = 0.0;
  int nodes = 0;
  bool expensive = false, no_timing = false;
  suite->add_option("--config", config, "JSON scenario configuration")->check(CLI::ExistingFile);
  suite->add_option("--filter", filter, "glob over check ids");
  suite->add_option("--seed", seed, "base seed");
  auto* tol_opt = suite->add_option("--tol", tol, "override every tolerance");
  auto* nodes_opt = suite->add_option("--nodes", nodes, "initial quadrature node count");
  suite->add_option("--json", json_path, "write JSON lines here and a summary to stdout");
  suite->add_flag("--expensive", expensive, "include nested-quadrature checks");
  suite->add_flag("--no-timing", no_timing, "report runtime_ms = 0 so reruns are byte-identical");

  auto* eval = app.add_subcommand("eval", "print one function value");
  std::string fn;
  std::vector<std::string> kv;
  eval->add_option("function", fn, "theta|gamma|gamma-mod|beta|v|r-kernel")->required();
  eval->add_option("args", kv, "name=re[,im] pairs");

  auto* bethe = app.add_subcommand("bethe", "solve the Bethe equations and report roots and energy");
  int N = 1;
  std::string a1 = "0.11,0.02", a2 = "0.23,-0.05", a3 = "-0.31,0.04", eta = "0.07,0.21", tau = "0,0.5";
  bethe->add_option("-N,--N", N, "number of roots (0, 1 or 2)")->check(CLI::Range(0, 2));
  bethe->add_option("--a1", a1);
  bethe->add_option("--a2", a2);
  bethe->add_option("--a3", a3, "a4 is fixed by the sum rule");
  bethe->add_option("--eta", eta);
  bethe->add_option("--tau", tau);

  auto* heun = app.add_subcommand("heun-limit", "order of the Heun limit as eta halves");
  std::string hu = "0.13,0.04", htau = "0,0.5";
  std::vector<double> alpha{0.3, 0.45, 0.2, 0.65};
  bool without_l = false;
  heun->add_option("--u", hu);
  heun->add_option("--tau", htau);
  heun->add_option("--alpha", alpha, "four exponents")->expected(4);
  heun->add_flag("--without-L", without_l, "drop the eta^2 L term (order falls to 2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*suite)
      return run_suite_cmd(config, filter, seed, tol_opt->count() ? std::optional<double>(tol) : std::nullopt,
                           nodes_opt->count() ? std::optional<int>(nodes) : std::nullopt, json_path, expensive,
                           no_timing);
    if (*eval) {
      std::cout << eval_function(fn, Args(kv)).dump() << '\n';
      return 0;
    }
    if (*bethe) return run_bethe(N, a1, a2, a3, eta, tau);
    if (*heun) return run_heun(hu, htau, alpha, without_l);
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << describe(e) << '\n';
    return 1;
  }
  return 2;
}
