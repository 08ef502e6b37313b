#include "test_support.hpp"

#include <cstdlib>

using namespace ellhyp;
using ellhyp::testing::C;

TEST(Quadrature, LaurentMonomialsExactBelowNodeCount) {
  QuadratureSpec s{64, 64, 1e-11, 0.05};
  for (int k = -63; k <= 63; ++k) {
    auto r = circle_mean([k](cplx z) { return std::pow(z, k); }, s);
    EXPECT_LT(std::abs(r.value - (k == 0 ? 1.0 : 0.0)), 1e-14) << k;
  }
}

TEST(Quadrature, AliasingAtNodeCount) {
  // z^N is invisible to N nodes: the mean comes out 1, not 0
  QuadratureSpec s{64, 64, 1e-11, 0.05};
  auto r = circle_mean([](cplx z) { return std::pow(z, 64); }, s);
  EXPECT_NEAR(r.value.real(), 1.0, 1e-13);
}

TEST(Quadrature, AnalyticFunctionConvergesGeometrically) {
  // mean of 1/(1 - a z) is 1; trapezoid error a^N / (1 - a^N)
  const double a = 0.9;
  auto f = [a](cplx z) { return 1.0 / (1.0 - a * z); };
  auto r = circle_mean(f, {64, 4096, 1e-13, 0.05});
  EXPECT_TRUE(r.converged);
  EXPECT_LT(std::abs(r.value - 1.0), 1e-13);
  auto h = circle_mean_history(f, {64, 256, 1e-13, 0.05});
  ASSERT_EQ(h.size(), 3u);
  EXPECT_NEAR(std::abs(h[0].value - 1.0), std::pow(a, 64) / (1 - std::pow(a, 64)), 1e-12);
}

TEST(Quadrature, CancellingIntegralDeclaredConverged) {
  auto r = circle_mean([](cplx z) { return z + 1.0 / z; }, {64, 1024, 1e-11, 0.05});
  EXPECT_TRUE(r.converged);
  EXPECT_LT(std::abs(r.value), 1e-15);
}

TEST(Quadrature, ResultIndependentOfThreadCount) {
  BasePair b(0.11, 0.23);
  auto f = [&](cplx z) { return gamma_weight(z, b) * gamma_pm(0.6, z, b); };
  QuadratureSpec s{256, 256, 1e-11, 0.05};
  cplx v1 = circle_mean(f, s).value;
  ::setenv("ELLHYP_THREADS", "1", 1);
  cplx v2 = circle_mean(f, s).value;
  ::setenv("ELLHYP_THREADS", "3", 1);
  cplx v3 = circle_mean(f, s).value;
  ::unsetenv("ELLHYP_THREADS");
  EXPECT_EQ(v1, v2);
  EXPECT_EQ(v1, v3);
}

TEST(Quadrature, KappaFactorFrozen) {
  // (p;p)(q;q) = 0.6301487077949518 at (0.11, 0.23), 30-digit oracle
  cplx k = kappa_mean_factor(BasePair(0.11, 0.23));
  EXPECT_NEAR(k.real(), 0.6301487077949518 / 2, 1e-16);
  EXPECT_LT(rel_diff(kappa_factor(BasePair(0.11, 0.23)) * 4.0 * pi * I, 2.0 * k), 1e-15);
}

TEST(Quadrature, PoleMargin) {
  EXPECT_TRUE(pole_margin_check(std::vector<cplx>{0.5, C(0, 0.95)}, 0.05));
  EXPECT_FALSE(pole_margin_check(std::vector<cplx>{0.5, 0.951}, 0.05));
}

TEST(Quadrature, CatalogChecksAcrossSeeds) { ellhyp::testing::expect_all_pass("quadrature.", 2); }

TEST(QuadratureErrors, SpecValidation) {
  auto f = [](cplx) { return cplx(1.0); };
  EXPECT_THROW(circle_mean(f, {100, 1024, 1e-11, 0.05}), ellhyp::invalid_argument);
  EXPECT_THROW(circle_mean(f, {32, 1024, 1e-11, 0.05}), ellhyp::invalid_argument);
  EXPECT_THROW(circle_mean(f, {256, 128, 1e-11, 0.05}), ellhyp::invalid_argument);
  EXPECT_THROW(circle_mean(f, {256, 1024, 1e-16, 0.05}), ellhyp::invalid_argument);
  EXPECT_THROW(circle_mean(f, {256, 1024, 1e-11, 0.5}), ellhyp::invalid_argument);
}

TEST(QuadratureErrors, NonFiniteIntegrandNamesTheNode) {
  auto f = [](cplx z) { return 1.0 / (z - 1.0); };
  try {
    circle_mean(f, {64, 64, 1e-11, 0.05});
    FAIL() << "expected integrand_failure";
  } catch (const integrand_failure& e) {
    EXPECT_NE(std::string(e.what()).find("(1,0)"), std::string::npos) << e.what();
  }
}

TEST(QuadratureExamples, ElementaryMeans) {
  EXPECT_LT(std::abs(circle_mean([](cplx) { return cplx(1.0); }).value - 1.0), 1e-15);
  EXPECT_LT(std::abs(circle_mean([](cplx z) { return z * z * z; }).value), 1e-16);
  EXPECT_LT(std::abs(circle_mean([](cplx z) { return 1.0 / (1.0 - 0.5 * z); }).value - 1.0), 1e-15);
}

TEST(QuadratureExamples, KappaFactor) {
  EXPECT_LT(std::abs(kappa_factor(BasePair(0.0, 0.0)) - 1.0 / (4.0 * pi * I)), 1e-17);
  EXPECT_EQ(kappa_factor(BasePair(0.11, 0.23)), kappa_factor(BasePair(0.23, 0.11)));
}

TEST(QuadratureExamples, PoleMarginCases) {
  EXPECT_TRUE(pole_margin_check(std::vector<cplx>(6, 0.5), 0.1));
  EXPECT_FALSE(pole_margin_check(std::vector<cplx>{0.5, 0.95, 0.5}, 0.1));
  std::vector<cplx> t{0.7, 0.65, 0.6, 0.55 * std::polar(1.0, pi / 7), 0.5};
  cplx pr = 1.0;
  for (auto x : t) pr *= x;
  t.push_back(0.11 * 0.23 / pr);
  EXPECT_TRUE(pole_margin_check(t, 0.05));
}
