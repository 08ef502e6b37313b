#include "test_support.hpp"

using namespace ellhyp;
using ellhyp::testing::C;

namespace {

const BasePair B(0.11, 0.23);

Params6 beta_canonical() {
  Params6 t{0.7, 0.65, 0.6, 0.55 * std::polar(1.0, pi / 7), 0.5, 0.0};
  cplx pr = 1.0;
  for (int i = 0; i < 5; ++i) pr *= t[i];
  t[5] = B.pq() / pr;
  return t;
}

Params8 v_canonical() {
  Params8 t{0.45 * std::polar(1.0, 0.3), 0.5 * std::polar(1.0, -1.1), 0.55 * std::polar(1.0, 2.0),
            0.6 * std::polar(1.0, 0.7), 0.65 * std::polar(1.0, -2.4), 0.7 * std::polar(1.0, 1.6),
            0.75 * std::polar(1.0, -0.2), 0.0};
  cplx pr = 1.0;
  for (int i = 0; i < 7; ++i) pr *= t[i];
  t[7] = B.pq() * B.pq() / pr;
  return t;
}

}  // namespace

// frozen from a 30-digit evaluation (tests/oracles/frozen_values.py)
TEST(IntegralsFrozen, EllipticBetaClosedForm) {
  cplx v = elliptic_beta_closed(beta_canonical(), B);
  EXPECT_LT(std::abs(v - C(193.71346041220058, 74.049411440176709)), 1e-12 * std::abs(v));
}

TEST(IntegralsFrozen, EllipticBetaQuadrature) {
  auto t = beta_canonical();
  auto r = ihm_integral(BalancedParams(0, {t.begin(), t.end()}, B));
  EXPECT_TRUE(r.converged);
  EXPECT_LT(rel_diff(r.value, C(193.71346041220058, 74.049411440176709)), 1e-9);
}

TEST(IntegralsFrozen, VFunction) {
  auto r = v_quad(v_canonical(), B);
  EXPECT_TRUE(r.converged);
  EXPECT_LT(rel_diff(r.value, C(0.68781382172128327, 0.41634911869006117)), 1e-9);
}

// moduli near (pq)^{1/4} keep both the set and its E7 images admissible
Params8 quarter_set() {
  Params8 s{};
  Sampler S(4);
  cplx pr = 1.0;
  for (int i = 0; i < 7; ++i) pr *= (s[i] = S.polar(0.35, 0.5));
  s[7] = B.pq() * B.pq() / pr;
  return s;
}

TEST(IntegralsProperties, ThirdE7TransformIsAnInvolution) {
  Params8 s = quarter_set();
  auto a = e7_transform(s, E7Kind::third, B, 0.01);
  auto b = e7_transform(a.t, E7Kind::third, B, 0.01);
  for (int i = 0; i < 8; ++i) EXPECT_LT(std::abs(b.t[i] - s[i]), 1e-15);
  EXPECT_LT(std::abs(a.prefactor * b.prefactor - 1.0), 1e-12);
}

TEST(IntegralsProperties, FirstE7TransformPreservesBalancing) {
  auto img = e7_transform(quarter_set(), E7Kind::first, B, 0.01);
  EXPECT_LT(std::abs(product(img.t) / (B.pq() * B.pq()) - 1.0), 1e-13);
}

TEST(IntegralsProperties, EpsilonParametrizationRoundTrip) {
  Params6 t{0.7, C(0.1, 0.6), -0.65, C(0.3, -0.7), 0.17, 0.0};
  cplx c = 0.2, pr = 1.0;
  for (int i = 0; i < 5; ++i) pr *= t[i];
  t[5] = B.pq() * B.pq() / (pr * c * c);
  auto E = EpsilonParams::from_t(t, c, B);
  auto back = E.to_t();
  for (int i = 0; i < 6; ++i) EXPECT_LT(rel_diff(back[i], t[i]), 1e-14);
}

TEST(IntegralsProperties, CatalogChecksAcrossSeeds) {
  for (auto* c : ellhyp::testing::checks_with_prefix("integrals.")) {
    if (c->id == "integrals.eheq_biorthogonality") continue;  // negative control below
    ellhyp::testing::expect_passes(*c, c->id == "integrals.elliptic_beta" ? 1 : 2);
  }
}

TEST(IntegralsProperties, BaileyStep) {
  ellhyp::testing::expect_passes(*find_check("integrals.bailey_step"), 1);
}

TEST(IntegralsNegative, EheqBiorthogonalityIsRejectedAsInadmissible) {
  const Check* c = find_check("integrals.eheq_biorthogonality");
  ASSERT_NE(c, nullptr);
  EXPECT_TRUE(c->expensive);
  auto r = run_scenario(*c, {}, scenario_seed(1, c->id, 0), {}, c->tolerance, false);
  EXPECT_FALSE(r.pass);
  EXPECT_TRUE(std::isinf(r.residual));
  EXPECT_EQ(r.notes.rfind("inadmissible:", 0), 0u) << r.notes;
}

TEST(IntegralsNegative, FlippedTermBreaksContiguousRelation) {
  Sampler S(21);
  Params8 t{};
  cplx pr = 1.0;
  for (int i = 0; i < 7; ++i) pr *= (t[i] = S.polar(0.3, 0.6));
  t[7] = B.p * B.p * B.q / pr;
  ASSERT_LT(double(contiguous_c1_residual(t, B)), 1e-7);
  auto n = B.nome_p();
  auto shifted = [&](int i) {
    Params8 s = t;
    s[i] *= B.q;
    return v_function(s, B);
  };
  cplx A = t[6] * theta_pm(t[7], t[6], n) * shifted(5);
  cplx Bt = -t[5] * theta_pm(t[7], t[5], n) * shifted(6);
  cplx Ct = -t[6] * theta_pm(t[5], t[6], n) * shifted(7);
  EXPECT_LT(term_residual({A, Bt, Ct}), 1e-7);
  EXPECT_GT(term_residual({A, Bt, -Ct}), 1e-2);
}

TEST(IntegralsErrors, BalancingAndMargin) {
  auto t = beta_canonical();
  t[5] *= 1.001;
  EXPECT_THROW(elliptic_beta_closed(t, B), ellhyp::invalid_argument);
  EXPECT_THROW(BalancedParams(0, {0.5, 0.5}, B), ellhyp::invalid_argument);
  EXPECT_THROW(BalancedParams(-1, {}, B), ellhyp::invalid_argument);
  auto v = v_canonical();
  v[0] = 0.97;
  v[7] = 1.0;
  cplx pr = 1.0;
  for (int i = 0; i < 7; ++i) pr *= v[i];
  v[7] = B.pq() * B.pq() / pr;
  EXPECT_THROW(v_quad(v, B), inadmissible_error);
}

TEST(IntegralsErrors, EpsilonBranchMismatch) {
  Params6 t{0.7, 0.6, 0.65, 0.5, 0.17, 0.0};
  cplx c = 0.2, pr = 1.0;
  for (int i = 0; i < 5; ++i) pr *= t[i];
  t[5] = B.pq() * B.pq() / (pr * c * c);
  auto E = EpsilonParams::from_t(t, c, B);
  EXPECT_THROW(EpsilonParams(E.eps, 0.3, B), ellhyp::invalid_argument);
}

TEST(IntegralsExamples, BetaProductSymmetries) {
  auto t = beta_canonical();
  cplx v = elliptic_beta_closed(t, B);
  Params6 r{t[3], t[5], t[0], t[4], t[1], t[2]};
  EXPECT_LT(rel_diff(elliptic_beta_closed(r, B), v), 1e-14);
  EXPECT_LT(rel_diff(elliptic_beta_closed(t, B.swapped()), v), 1e-14);
}

TEST(IntegralsExamples, VSymmetries) {
  auto t = v_canonical();
  cplx v = v_function(t, B);
  Params8 s = t;
  std::swap(s[0], s[6]);
  EXPECT_LT(rel_diff(v_function(s, B), v), 1e-13);
  Params8 c{};
  for (int i = 0; i < 8; ++i) c[i] = std::conj(t[i]);
  EXPECT_LT(rel_diff(v_function(c, B), std::conj(v)), 1e-13);
  auto h = v_quad(t, B, {64, 4096, 1e-12, 0.05});
  EXPECT_LT(h.error_estimate, 1e-10);
}

TEST(IntegralsExamples, FirstE7TransformTwice) {
  Params8 s = quarter_set();
  auto a = e7_transform(s, E7Kind::first, B, 0.01);
  auto b = e7_transform(a.t, E7Kind::first, B, 0.01);
  for (int i = 0; i < 8; ++i) EXPECT_LT(std::abs(b.t[i] - s[i]), 1e-14);
}

TEST(IntegralsExamples, ThirdE7TransformOnTheQuarterTorus) {
  double m = std::pow(std::abs(B.pq()), 0.25);
  Params8 s{};
  cplx pr = 1.0;
  for (int i = 0; i < 7; ++i) pr *= (s[i] = m * std::polar(1.0, 0.7 * i + 0.2));
  s[7] = B.pq() * B.pq() / pr;
  auto a = e7_transform(s, E7Kind::third, B);
  for (int i = 0; i < 8; ++i) EXPECT_NEAR(std::abs(a.t[i]), std::abs(s[i]), 1e-15);
}

TEST(IntegralsExamples, DegenerateAndInvalidRelations) {
  Params8 t = quarter_set();
  EXPECT_THROW(contiguous_c1_residual(t, B), ellhyp::invalid_argument);  // balancing is (pq)^2, not p^2 q
  EXPECT_THROW(key_eheq_residual(t, t[2], t[3], B), degenerate_error);
  cplx t3p = 0.4, t4p = t[2] * t[3] / t3p;
  EXPECT_THROW(op_ident_residual(t, t3p, t4p, t3p, t4p, B), degenerate_error);
  Params6 t6{0.7, 0.65, 0.6, 0.55, 0.17, 0.0};
  cplx c = 0.2, pr = 1.0;
  for (int i = 0; i < 5; ++i) pr *= t6[i];
  t6[5] = B.pq() * B.pq() / (pr * c * c);
  // x = c t6 puts Gamma(t7 t6) = Gamma(1) on a pole
  EXPECT_THROW(eheq_residual(t6, c, c * t6[5], B), std::domain_error);
}

TEST(IntegralsExamples, DxOperatorOnConstantsAndSymmetry) {
  Params6 t{0.7, C(0.1, 0.6), -0.65, C(0.3, -0.7), 0.17, 0.0};
  cplx c = 0.2, pr = 1.0;
  for (int i = 0; i < 5; ++i) pr *= t[i];
  t[5] = B.pq() * B.pq() / (pr * c * c);
  auto E = EpsilonParams::from_t(t, c, B);
  cplx x = std::polar(1.0, 0.8);
  EXPECT_LT(rel_diff(dx_operator_apply(E, [](cplx) { return cplx(1.0); }, x), E.nu()), 1e-14);
  auto e = E.eps;
  std::swap(e[0], e[5]);
  std::swap(e[1], e[3]);
  cplx p4 = B.p * B.p * B.p * B.p;
  EpsilonParams Ep(e, std::sqrt(e[5] * e[7] / p4), B);
  EXPECT_LT(rel_diff(Ep.A(x), E.A(x)), 1e-14);
  EXPECT_LT(rel_diff(Ep.nu(), E.nu()), 1e-14);
}

TEST(IntegralsExamples, DxAdjointOnConstants) {
  Params6 t{0.7 * std::polar(1.0, 0.3), 0.65 * std::polar(1.0, -0.8), 0.75 * std::polar(1.0, 1.9),
            0.62 * std::polar(1.0, 2.5), 0.17 * std::polar(1.0, -1.1), 0.0};
  cplx c = 0.2, pr = 1.0;
  for (int i = 0; i < 5; ++i) pr *= t[i];
  t[5] = B.pq() * B.pq() / (pr * c * c);
  auto E = EpsilonParams::from_t(t, c, B);
  Fn one = [](cplx) { return cplx(1.0); };
  EXPECT_LT(double(dx_adjoint_residual(E, one, one)), 1e-7);
}
