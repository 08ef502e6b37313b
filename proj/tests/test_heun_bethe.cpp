#include "test_support.hpp"

using namespace ellhyp;
using ellhyp::testing::C;

namespace {

const cplx TAU = C(0, 0.5), ETA = C(0.07, 0.21);

Quad canonical_a(int N) { return BetheConfig::complete(C(0.11, 0.02), C(0.23, -0.05), C(-0.31, 0.04), N, ETA); }

// distance from r to +-ref modulo the lattice Z + tau Z
double lattice_distance(cplx r, cplx ref, cplx tau) {
  double best = 1e300;
  for (double s : {1.0, -1.0})
    for (int m = -2; m <= 2; ++m)
      for (int n = -2; n <= 2; ++n) best = std::min(best, std::abs(s * r - ref + double(m) + double(n) * tau));
  return best;
}

const Alpha4 AL{0.3, 0.45, 0.2, 0.65};
const std::vector<double> ETAS{0.02, 0.01, 0.005, 0.0025};

}  // namespace

// frozen from a 30-digit root search (tests/oracles/frozen_values.py)
TEST(BetheFrozen, SingleRoot) {
  auto c = bethe_solve(1, canonical_a(1), ETA, TAU);
  ASSERT_EQ(c.roots.size(), 1u);
  EXPECT_LT(lattice_distance(c.roots[0], C(0.21440775894547591, -0.080119063133747198), TAU), 1e-12);
}

TEST(HeunFrozen, WeierstrassLike) {
  cplx v = weierstrass_p(0.3, TAU);
  EXPECT_NEAR(v.real(), 16.40468532610478, 1e-11);
  EXPECT_NEAR(v.imag(), 0.0, 1e-11);
}

TEST(BetheProperties, EnergyIndependentOfL) {
  for (int N : {1, 2}) {
    auto c = bethe_solve(N, canonical_a(N), ETA, TAU);
    EXPECT_LT(bethe_energy_spread(c), 1e-8) << N;
    for (cplx u : {C(0.17, 0.09), C(0.33, -0.12), C(0.61, 0.2)}) EXPECT_LT(devp_residual(u, c), 1e-8) << N;
  }
}

TEST(BetheProperties, EmptyConfigurationIsAnEigenfunction) {
  BetheConfig c(0, canonical_a(0), {}, ETA, TAU);
  EXPECT_LT(devp_residual(C(0.27, 0.1), c), 1e-12);
}

TEST(BetheProperties, RootsSolveTheSystem) {
  auto c = bethe_solve(2, canonical_a(2), ETA, TAU);
  for (double r : bethe_system_residual(c)) EXPECT_LT(r, bethe_tol);
}

TEST(HeunProperties, CatalogChecksAcrossSeeds) { ellhyp::testing::expect_all_pass("heun.", 3); }

TEST(HeunProperties, LimitOrderThree) {
  Fn f = [](cplx x) { return std::exp(0.7 * x) + x * x; };
  Fn f2 = [](cplx x) { return 0.49 * std::exp(0.7 * x) + 2.0; };
  auto h = heun_limit_order(f, f2, C(0.13, 0.04), AL, TAU, ETAS);
  EXPECT_NEAR(h.order, 3.0, 0.3);
  EXPECT_FALSE(h.precision_floor);
}

TEST(HeunNegative, WithoutLTheOrderDropsToTwo) {
  Fn f = [](cplx x) { return std::exp(0.7 * x) + x * x; };
  Fn f2 = [](cplx x) { return 0.49 * std::exp(0.7 * x) + 2.0; };
  auto h = heun_limit_order(f, f2, C(0.13, 0.04), AL, TAU, ETAS, false);
  EXPECT_NEAR(h.order, 2.0, 0.1);
}

TEST(BetheNegative, PerturbedRootsFail) {
  auto c = bethe_solve(1, canonical_a(1), ETA, TAU);
  BetheConfig bad(1, c.a, {c.roots[0] + 1e-3}, ETA, TAU);
  EXPECT_GT(bethe_system_residual(bad)[0], 1e-6);
  EXPECT_GT(std::max(bethe_energy_spread(bad), devp_residual(C(0.17, 0.09), bad)), 1e-6);
}

TEST(HeunBetheErrors, InvalidInputs) {
  EXPECT_THROW(bethe_solve(3, canonical_a(3), ETA, TAU), ellhyp::invalid_argument);
  EXPECT_THROW(bethe_solve(1, canonical_a(2), ETA, TAU), ellhyp::invalid_argument);
  EXPECT_THROW(BetheConfig(1, canonical_a(1), {}, ETA, TAU), ellhyp::invalid_argument);
  EXPECT_THROW(bethe_energy(BetheConfig(0, canonical_a(0), {}, ETA, TAU), 5), ellhyp::invalid_argument);
  EXPECT_THROW(weierstrass_p(0.0, TAU), pole_error);
  EXPECT_THROW(weierstrass_p(C(1.0, 0.5), TAU), pole_error);
  Fn f = [](cplx x) { return x; };
  EXPECT_THROW(heun_limit_order(f, f, 0.1, AL, TAU, {0.01}), ellhyp::invalid_argument);
  EXPECT_THROW(heun_limit_order(f, f, 0.1, AL, TAU, {0.01, -0.01}), ellhyp::invalid_argument);
  EXPECT_THROW(ZeroModeConfig(0.3, 0.2, 0.2, BasePair(0.11, 0.23)), ellhyp::invalid_argument);
}

TEST(HeunBetheExamples, PsiValues) {
  BetheConfig c0(0, canonical_a(0), {}, ETA, TAU);
  EXPECT_EQ(bethe_psi(C(0.4, 0.1), c0), cplx(1.0));
  EXPECT_TRUE(bethe_system_residual(c0).empty());
  cplx u1 = C(0.23, 0.11);
  BetheConfig c1(1, canonical_a(1), {u1}, ETA, TAU);
  EXPECT_LT(rel_diff(bethe_psi(0.4, c1), theta1(0.4 + u1, TAU) * theta1(0.4 - u1, TAU)), 1e-15);
  auto c2 = bethe_solve(2, canonical_a(2), ETA, TAU);
  cplx u = C(0.17, 0.09);
  EXPECT_LT(rel_diff(bethe_psi(-u, c2), bethe_psi(u, c2)), 1e-14);
}

TEST(HeunBetheExamples, RootsAreOrderedAndRegular) {
  auto c = bethe_solve(2, canonical_a(2), ETA, TAU);
  auto lex = [](cplx x, cplx y) { return x.real() < y.real() || (x.real() == y.real() && x.imag() <= y.imag()); };
  EXPECT_TRUE(lex(c.roots[0], c.roots[1]));
  for (auto r : c.roots) EXPECT_GT(std::abs(theta1(2.0 * r, TAU)), 1e-6);
}

TEST(HeunBetheExamples, EmptyStateEnergy) {
  BetheConfig c0(0, canonical_a(0), {}, ETA, TAU);
  EXPECT_LT(bethe_energy_spread(c0), 1e-10);
}

TEST(HeunBetheExamples, DevpAtHalfPeriodThrows) {
  auto c = bethe_solve(1, canonical_a(1), ETA, TAU);
  EXPECT_THROW(devp_residual(0.5, c), pole_error);
}

TEST(HeunBetheExamples, WeierstrassLikeFunction) {
  cplx u = C(0.3, 0.07);
  EXPECT_LT(rel_diff(weierstrass_p(-u, TAU), weierstrass_p(u, TAU)), 1e-14);
  EXPECT_LT(rel_diff(weierstrass_p(u + 1.0, TAU), weierstrass_p(u, TAU)), 1e-13);
  EXPECT_LT(rel_diff(weierstrass_p(u + TAU, TAU), weierstrass_p(u, TAU)), 1e-13);
  // fourth order central difference of -log theta1
  double h = 1e-3;
  auto lg = [](cplx x) { return std::log(theta1(x, TAU)); };
  cplx d2 = (-lg(u + 2.0 * h) + 16.0 * lg(u + h) - 30.0 * lg(u) + 16.0 * lg(u - h) - lg(u - 2.0 * h)) / (12.0 * h * h);
  EXPECT_LT(std::abs(weierstrass_p(u, TAU) + d2), 1e-8 * std::abs(d2));
}

TEST(HeunBetheExamples, LOnExponentialWithoutPotential) {
  Fn f = [](cplx x) { return std::exp(2.0 * pi * I * x); };
  Fn f2 = [](cplx x) { return -4.0 * pi * pi * std::exp(2.0 * pi * I * x); };
  cplx u = C(0.21, 0.03);
  EXPECT_LT(rel_diff(heun_l_apply(f, f2, u, {0, 1, 0, 1}, TAU), 4.0 * pi * pi * f(u)), 1e-14);
}

TEST(HeunBetheExamples, ConstantWithoutPotentialConvergesFast) {
  Fn one = [](cplx) { return cplx(1.0); };
  Fn zero = [](cplx) { return cplx(0.0); };
  auto h = heun_limit_order(one, zero, C(0.21, 0.03), {0, 1, 0, 1}, TAU, ETAS);
  EXPECT_TRUE(h.precision_floor || h.order > 2.7) << h.order;
}

TEST(HeunBetheExamples, VanDiejenReduction) {
  BasePair b(0.11, 0.23);
  auto c = VanDiejenConfig::reduced(C(0.7, 0.2), C(-0.5, 0.6), 0.9, b);
  cplx x = std::polar(1.0, 0.7);
  Fn one = [](cplx) { return cplx(1.0); };
  Fn g = [](cplx y) { return y + 1.0 / y; };
  EXPECT_LT(vd_reduction_residual(c, one, x), 1e-10);
  EXPECT_LT(vd_reduction_residual(c, g, x), 1e-10);
  auto e = c.eps;
  e[7] *= 1.01;
  EXPECT_THROW(VanDiejenConfig(e, b), ellhyp::invalid_argument);
}
