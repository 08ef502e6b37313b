#pragma once
// Suite configuration, check selection and scenario execution.

#include <chrono>
#include <fstream>
#include <optional>
#include <sstream>

#include "checks.hpp"

namespace ellhyp {

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CheckRequest {
  std::string id;
  ParamMap overrides;
};

struct SuiteConfig {
  CheckContext context;
  std::vector<CheckRequest> checks;  // empty: the whole catalog
};

struct SuiteOptions {
  std::string filter = "*";
  std::uint64_t seed = 1;
  std::optional<double> tolerance;
  std::optional<int> nodes;
  bool expensive = false;
  bool timing = true;
};

// '*' matches any run, '?' one character
inline bool glob_match(const std::string& pat, const std::string& s) {
  std::size_t p = 0, t = 0, star = std::string::npos, mark = 0;
  while (t < s.size()) {
    if (p < pat.size() && (pat[p] == '?' || pat[p] == s[t])) {
      ++p;
      ++t;
    } else if (p < pat.size() && pat[p] == '*') {
      star = p++;
      mark = t;
    } else if (star != std::string::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pat.size() && pat[p] == '*') ++p;
  return p == pat.size();
}

inline SuiteConfig parse_config(const nlohmann::json& j) {
  SuiteConfig c;
  try {
    if (!j.is_object()) throw usage_error("config: top level must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
      if (it.key() != "bases" && it.key() != "quadrature" && it.key() != "checks")
        throw usage_error("config: unknown key '" + it.key() + "'");
    if (j.contains("bases")) {
      const auto& b = j.at("bases");
      cplx p = b.contains("p") ? complex_from_json(b.at("p")) : c.context.bases.p;
      cplx q = b.contains("q") ? complex_from_json(b.at("q")) : c.context.bases.q;
      c.context.bases = BasePair(p, q);
    }
    if (j.contains("quadrature")) {
      const auto& q = j.at("quadrature");
      auto& s = c.context.spec;
      if (q.contains("n0")) s.n0 = q.at("n0").get<int>();
      if (q.contains("n_max")) s.n_max = q.at("n_max").get<int>();
      if (q.contains("rtol")) s.rtol = q.at("rtol").get<double>();
      if (q.contains("margin")) s.margin = q.at("margin").get<double>();
      s.validate();
    }
    if (j.contains("checks")) {
      for (const auto& e : j.at("checks")) {
        CheckRequest r;
        r.id = e.at("id").get<std::string>();
        if (!find_check(r.id)) throw usage_error("config: unknown check_id '" + r.id + "'");
        if (e.contains("overrides")) r.overrides = params_from_json(e.at("overrides"));
        c.checks.push_back(std::move(r));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw usage_error(std::string("config: ") + e.what());
  } catch (const ellhyp::invalid_argument& e) {
    throw usage_error(std::string("config: ") + e.what());
  }
  return c;
}

inline SuiteConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw usage_error("config: cannot read " + path);
  try {
    return parse_config(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw usage_error(std::string("config: ") + e.what());
  }
}

struct PlannedCheck {
  const Check* check;
  ParamMap overrides;
};

// Checks in definition order (config order when the config lists them).
// Expensive checks run only with opts.expensive or when listed explicitly.
inline std::vector<PlannedCheck> plan_checks(const SuiteConfig& cfg, const SuiteOptions& opts) {
  std::vector<PlannedCheck> out;
  if (cfg.checks.empty()) {
    for (const auto& c : check_catalog())
      if (glob_match(opts.filter, c.id) && (!c.expensive || opts.expensive)) out.push_back({&c, {}});
  } else {
    for (const auto& r : cfg.checks) {
      const Check* c = find_check(r.id);
      if (!c) throw usage_error("unknown check_id '" + r.id + "'");
      if (glob_match(opts.filter, c->id)) out.push_back({c, r.overrides});
    }
  }
  if (out.empty()) throw usage_error("filter '" + opts.filter + "' matches no check");
  return out;
}

inline std::string describe(const std::exception& e) {
  const char* kind = "error";
  if (dynamic_cast<const sampling_failure*>(&e)) kind = "sampling_failure";
  else if (dynamic_cast<const inadmissible_error*>(&e)) kind = "inadmissible";
  else if (dynamic_cast<const pole_error*>(&e)) kind = "pole_error";
  else if (dynamic_cast<const regime_error*>(&e)) kind = "regime_error";
  else if (dynamic_cast<const degenerate_error*>(&e)) kind = "degenerate";
  else if (dynamic_cast<const solver_failure*>(&e)) kind = "solver_failure";
  else if (dynamic_cast<const integrand_failure*>(&e)) kind = "integrand_failure";
  else if (dynamic_cast<const std::invalid_argument*>(&e)) kind = "invalid_argument";
  return std::string(kind) + ": " + e.what();
}

// Draws the scenario for one sample of a check; overrides replace sampled
// values verbatim.
inline Scenario sample_scenario(const Check& c, const CheckContext& ctx, std::uint64_t seed,
                                const ParamMap& overrides = {}) {
  Sampler S(seed);
  Scenario sc{c.id, c.sample(S, ctx), seed};
  for (const auto& [k, v] : overrides) sc.parameters[k] = v;
  return sc;
}

inline ResidualReport run_scenario(const Check& c, const CheckContext& ctx, std::uint64_t seed,
                                   const ParamMap& overrides, double tolerance, bool timing) {
  ResidualReport r;
  r.check_id = c.id;
  r.tolerance = tolerance;
  auto t0 = std::chrono::steady_clock::now();
  try {
    Scenario sc = sample_scenario(c, ctx, seed, overrides);
    r.parameters = sc.parameters;
    Outcome o = c.run(sc.parameters, ctx);
    r.residual = std::isfinite(o.residual) ? o.residual : std::numeric_limits<double>::infinity();
    r.nodes_used = o.nodes_used;
    r.pass = r.residual <= tolerance && o.converged;
    std::string notes = c.restriction;
    if (!o.notes.empty()) notes += (notes.empty() ? "" : "; ") + o.notes;
    if (!o.converged) notes += std::string(notes.empty() ? "" : "; ") + "quadrature not converged";
    r.notes = notes;
  } catch (const std::exception& e) {
    r.residual = std::numeric_limits<double>::infinity();
    r.pass = false;
    r.notes = describe(e);
  }
  if (timing)
    r.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// Runs the plan sequentially (quadratures parallelize internally) and hands
// each report to emit as soon as it is ready.
template <class Emit>
std::vector<ResidualReport> run_suite(const SuiteConfig& cfg, const SuiteOptions& opts, Emit&& emit) {
  CheckContext ctx = cfg.context;
  if (opts.nodes) {
    ctx.spec.n0 = *opts.nodes;
    ctx.spec.n_max = std::max(ctx.spec.n_max, ctx.spec.n0);
    try {
      ctx.spec.validate();
    } catch (const ellhyp::invalid_argument& e) {
      throw usage_error(std::string("--nodes: ") + e.what());
    }
  }
  std::vector<ResidualReport> out;
  for (const auto& pc : plan_checks(cfg, opts)) {
    double tol = opts.tolerance.value_or(pc.check->tolerance);
    for (int i = 0; i < pc.check->samples; ++i) {
      auto r = run_scenario(*pc.check, ctx, scenario_seed(opts.seed, pc.check->id, i), pc.overrides, tol, opts.timing);
      emit(r);
      out.push_back(std::move(r));
    }
  }
  return out;
}

inline std::vector<ResidualReport> run_suite(const SuiteConfig& cfg, const SuiteOptions& opts) {
  return run_suite(cfg, opts, [](const ResidualReport&) {});
}

}  // namespace ellhyp
