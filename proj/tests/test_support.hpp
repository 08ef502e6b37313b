#pragma once
// Shared helpers: run catalog checks over several base seeds.

#include <gtest/gtest.h>

#include <ellhyp/ellhyp.hpp>

namespace ellhyp::testing {

inline std::vector<const Check*> checks_with_prefix(const std::string& prefix, bool expensive = false) {
  std::vector<const Check*> out;
  for (const auto& c : check_catalog())
    if (c.id.rfind(prefix, 0) == 0 && (expensive || !c.expensive)) out.push_back(&c);
  return out;
}

// every sample of the check passes for base seeds 1..n_seeds
inline void expect_passes(const Check& c, int n_seeds, const CheckContext& ctx = {}) {
  for (int s = 1; s <= n_seeds; ++s)
    for (int i = 0; i < c.samples; ++i) {
      auto r = run_scenario(c, ctx, scenario_seed(s, c.id, i), {}, c.tolerance, false);
      EXPECT_TRUE(r.pass) << c.id << " seed " << s << " sample " << i << ": residual " << r.residual << " tol "
                          << r.tolerance << " (" << r.notes << ")";
    }
}

inline void expect_all_pass(const std::string& prefix, int n_seeds) {
  auto cs = checks_with_prefix(prefix);
  ASSERT_FALSE(cs.empty()) << prefix;
  for (auto* c : cs) expect_passes(*c, n_seeds);
}

inline cplx C(double re, double im = 0.0) { return {re, im}; }

// naive long double double product, 120 x 120 factors
inline cplx naive_gamma(cplx z_, cplx p_, cplx q_) {
  using L = std::complex<long double>;
  L z(z_), p(p_), q(q_), r = 1.0L, pj = 1.0L;
  for (int j = 0; j < 120; ++j) {
    L pk = pj;
    for (int k = 0; k < 120; ++k) {
      r *= (1.0L - p * q * pk / z) / (1.0L - z * pk);
      pk *= q;
    }
    pj *= p;
  }
  return {double(r.real()), double(r.imag())};
}

}  // namespace ellhyp::testing
