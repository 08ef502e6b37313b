#include "test_support.hpp"

using namespace ellhyp;
using ellhyp::testing::C;

namespace {
const SklyaninParams P = SklyaninParams::canonical();
const Fn f = [](cplx u) { return std::exp(0.7 * u) + u * u + std::exp(2.0 * pi * I * u); };
}  // namespace

TEST(SklyaninProperties, JacobiIdentityAtZero) {
  std::array<cplx, 4> t{};
  for (int k = 1; k <= 4; ++k) t[k - 1] = jacobi_theta(k, 0.0, P.tau);
  EXPECT_LT(std::abs(std::pow(t[2], 4) - std::pow(t[1], 4) - std::pow(t[3], 4)), 1e-14);
}

TEST(SklyaninProperties, StructureConstantsTwoForms) {
  for (auto [b, c] : {std::pair{2, 3}, {3, 1}, {1, 2}}) EXPECT_LT(rel_diff(P.Jpair(b, c), P.Jpair_alt(b, c)), 1e-12);
  EXPECT_LT(std::abs(P.J12() + P.J23() + P.J31() + P.J12() * P.J23() * P.J31()), 1e-12);
}

TEST(SklyaninProperties, TauEtaSwapIsAnInvolution) {
  auto Q = P.tau_eta_swapped().tau_eta_swapped();
  EXPECT_EQ(Q.eta, P.eta);
  EXPECT_EQ(Q.tau, P.tau);
}

TEST(SklyaninProperties, CrossCommutationPattern) {
  // tau/eta swap: {0,3} and {1,2} commute within, anticommute across
  EXPECT_TRUE(cross_commutes(0, 3, Double::tau_eta_swap));
  EXPECT_FALSE(cross_commutes(0, 1, Double::tau_eta_swap));
  EXPECT_TRUE(cross_commutes(0, 1, Double::omega_swap));
  EXPECT_FALSE(cross_commutes(1, 2, Double::omega_swap));
}

TEST(SklyaninProperties, CatalogChecksAcrossSeeds) { ellhyp::testing::expect_all_pass("sklyanin.", 4); }

TEST(SklyaninNegative, WrongCrossCommutationSignFails) {
  cplx u = C(0.21, 0.03);
  for (auto d : {Double::tau_eta_swap, Double::omega_swap})
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        Op S = s_generator(a, P), St = s_tilde_generator(b, P, d);
        double right = cross_commutes(a, b, d) ? 1.0 : -1.0;
        EXPECT_LT(exchange_residual(S, St, right, f, u), 1e-9) << a << b;
        EXPECT_GT(exchange_residual(S, St, -right, f, u), 1e-3) << a << b;
      }
}

TEST(SklyaninNegative, GeneratorsDoNotCommute) {
  cplx u = C(0.21, 0.03);
  Op S0 = s_generator(0, P), S1 = s_generator(1, P);
  EXPECT_GT(exchange_residual(S0, S1, 1.0, f, u), 1e-3);
}

TEST(SklyaninErrors, IndicesRegimesAndPoles) {
  EXPECT_THROW(s_generator(4, P), ellhyp::invalid_argument);
  EXPECT_THROW(P.J(0), ellhyp::invalid_argument);
  EXPECT_THROW(P.Jpair(2, 1), ellhyp::invalid_argument);
  EXPECT_THROW(SklyaninParams(C(0.1, -0.2), C(0, 0.5), 0.1).tau_eta_swapped(), regime_error);
  EXPECT_THROW(SklyaninParams(0.1, C(0.3, 0.0), 0.1), ellhyp::invalid_argument);
  // theta1(2u) = 0 at u = 0
  EXPECT_THROW(s_generator(1, P)(f, 0.0), pole_error);
  EXPECT_THROW(delta_combination({0.1, 0.2, 0.3, 0.4}, P), ellhyp::invalid_argument);
}

TEST(SklyaninExamples, S0OnConstants) {
  Op S0 = s_generator(0, P);
  Fn one = [](cplx) { return cplx(1.0); };
  cplx u = C(0.13, 0.04);
  cplx ref = theta1(P.eta, P.tau) * (theta1(2.0 * u - 2.0 * P.g, P.tau) - theta1(-2.0 * u - 2.0 * P.g, P.tau)) /
             theta1(2.0 * u, P.tau);
  EXPECT_LT(rel_diff(S0(one, u), ref), 1e-14);
}

TEST(SklyaninExamples, RelationsOnSimpleFunctions) {
  cplx u = C(0.13, 0.04);
  Fn one = [](cplx) { return cplx(1.0); };
  Fn th = [](cplx x) { return theta1(x, P.tau) * theta1(-x, P.tau); };
  EXPECT_LT(sklyanin_relations_residual(P, one, u), 1e-10);
  EXPECT_LT(sklyanin_relations_residual(P, th, u), 1e-10);
}

TEST(SklyaninExamples, CasimirsAtSpinOneHalf) {
  SklyaninParams Q(P.eta, P.tau, P.eta / 2.0);
  Fn one = [](cplx) { return cplx(1.0); };
  auto r = casimir_residuals(Q, one, C(0.13, 0.04));
  EXPECT_LT(r.k0, 1e-9);
  EXPECT_LT(r.k2, 1e-9);
}

TEST(SklyaninExamples, OmegaSwapShiftsByOneHalf) {
  for (int a = 0; a < 4; ++a) EXPECT_EQ(s_tilde_generator(a, P, Double::omega_swap).shift, cplx(0.5));
  EXPECT_EQ(s_tilde_generator(0, P, Double::tau_eta_swap).shift, P.tau / 2.0);
}
