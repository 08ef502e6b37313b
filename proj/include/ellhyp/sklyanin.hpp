#pragma once
// Sklyanin algebra generators as difference operators in the additive
// variable u, their two modular-double partners, the Delta operator and the
// U_q(sl2) endpoint operators.

#include "biorthogonality.hpp"

namespace ellhyp {

// jac-id: 2 theta1(b - B/2) = theta1(b) + theta1(b + 1/2)
//   + e^{pi i (tau + B)} (theta1(b + tau/2) - theta1(b + 1/2 + tau/2))
inline double jacobi_identity_residual(const std::array<cplx, 4>& b, cplx tau) {
  cplx B = b[0] + b[1] + b[2] + b[3];
  auto prod = [&](cplx s) {
    cplx r = 1.0;
    for (auto x : b) r *= theta1(x + s, tau);
    return r;
  };
  cplx lhs = 2.0 * prod(-B / 2.0);
  cplx e = std::exp(pi * I * (tau + B));
  return term_residual({-lhs, prod(0.0), prod(0.5), e * prod(tau / 2.0), -e * prod(0.5 + tau / 2.0)});
}

struct SklyaninParams {
  cplx eta, tau, g;

  SklyaninParams(cplx eta_, cplx tau_, cplx g_) : eta(eta_), tau(tau_), g(g_) {
    require_tau(tau);
    require_finite(eta, "SklyaninParams");
    require_finite(g, "SklyaninParams");
  }
  static SklyaninParams canonical() { return {cplx(0.07, 0.21), cplx(0.0, 0.5), 0.17}; }

  cplx th(int k, cplx u) const { return jacobi_theta(k, u, tau); }
  cplx p() const { return nome_from_tau(tau); }
  cplx q() const { return std::exp(4.0 * pi * I * eta); }
  // i p^{1/8} / (p;p)^3, the duplication constant
  cplx chi() const {
    cplx pp = qpochhammer(p(), Nome(p()));
    return I * p_eighth(tau) / (pp * pp * pp);
  }

  cplx J12() const {
    cplx t1 = th(1, eta), t2 = th(2, eta), t3 = th(3, eta), t4 = th(4, eta);
    return t1 * t1 * t4 * t4 / (t2 * t2 * t3 * t3);
  }
  cplx J23() const {
    cplx t1 = th(1, eta), t2 = th(2, eta), t3 = th(3, eta), t4 = th(4, eta);
    return t1 * t1 * t2 * t2 / (t3 * t3 * t4 * t4);
  }
  cplx J31() const {
    cplx t1 = th(1, eta), t2 = th(2, eta), t3 = th(3, eta), t4 = th(4, eta);
    return -t1 * t1 * t3 * t3 / (t2 * t2 * t4 * t4);
  }
  // J_a = theta_{a+1}(2 eta) theta_{a+1}(0) / theta_{a+1}(eta)^2, a = 1..3
  cplx J(int a) const {
    if (a < 1 || a > 3) throw invalid_argument("SklyaninParams::J: index must be 1..3");
    cplx t = th(a + 1, eta);
    return th(a + 1, 2.0 * eta) * th(a + 1, 0.0) / (t * t);
  }
  // J_{beta gamma} for the cyclic pairs (2,3), (3,1), (1,2)
  cplx Jpair(int b, int c) const {
    if (b == 2 && c == 3) return J23();
    if (b == 3 && c == 1) return J31();
    if (b == 1 && c == 2) return J12();
    throw invalid_argument("SklyaninParams::Jpair: pair must be cyclic");
  }
  // (J_beta - J_alpha) / J_gamma
  cplx Jpair_alt(int b, int c) const {
    int a = 6 - b - c;
    return (J(c) - J(b)) / J(a);
  }

  // tau -> 2 eta, eta -> tau / 2; applying it twice is the identity
  SklyaninParams tau_eta_swapped() const {
    if (!(eta.imag() > 0.0)) throw regime_error("tau_eta_swap: need Im(eta) > 0");
    return {tau / 2.0, 2.0 * eta, g};
  }
};

// ---- operators --------------------------------------------------------------

using RFn = std::function<double(cplx)>;

// Type-erased operator: (f, u) -> (A f)(u). Composition nests lazily. mag
// evaluates the same tree with |coefficients| on |f|, the term scale used to
// normalize residuals.
struct Op {
  std::function<cplx(const Fn&, cplx)> act;
  std::function<double(const RFn&, cplx)> mag;

  cplx operator()(const Fn& f, cplx u) const { return act(f, u); }
  Fn apply(const Fn& f) const {
    auto a = act;
    return [a, f](cplx u) { return a(f, u); };
  }
  RFn apply_mag(const RFn& f) const {
    auto m = mag;
    return [m, f](cplx u) { return m(f, u); };
  }
  double scale(const Fn& f, cplx u) const {
    return mag([f](cplx x) { return std::abs(f(x)); }, u);
  }
};

// A B
inline Op compose(const Op& A, const Op& B) {
  return {[A, B](const Fn& f, cplx u) { return A(B.apply(f), u); },
          [A, B](const RFn& f, cplx u) { return A.mag(B.apply_mag(f), u); }};
}
inline Op operator+(const Op& A, const Op& B) {
  return {[A, B](const Fn& f, cplx u) { return A(f, u) + B(f, u); },
          [A, B](const RFn& f, cplx u) { return A.mag(f, u) + B.mag(f, u); }};
}
inline Op operator*(cplx c, const Op& A) {
  return {[c, A](const Fn& f, cplx u) { return c * A(f, u); },
          [c, A](const RFn& f, cplx u) { return std::abs(c) * A.mag(f, u); }};
}
inline Op operator-(const Op& A, const Op& B) { return A + (-1.0) * B; }
inline Op commutator(const Op& A, const Op& B) { return compose(A, B) - compose(B, A); }
inline Op anticommutator(const Op& A, const Op& B) { return compose(A, B) + compose(B, A); }
inline Op identity_op() {
  return {[](const Fn& f, cplx u) { return f(u); }, [](const RFn& f, cplx u) { return f(u); }};
}
// multiplication by a constant
inline Op scalar_op(cplx c) { return c * identity_op(); }

// coeff_plus(u) f(u + shift) + coeff_minus(u) f(u - shift) + coeff_zero(u) f(u);
// an empty coefficient counts as zero.
struct ShiftOperator1D {
  cplx shift = 0.0;
  Fn coeff_plus, coeff_minus, coeff_zero;

  cplx operator()(const Fn& f, cplx u) const {
    cplx r = 0.0;
    if (coeff_plus) r += coeff_plus(u) * f(u + shift);
    if (coeff_minus) r += coeff_minus(u) * f(u - shift);
    if (coeff_zero) r += coeff_zero(u) * f(u);
    return r;
  }
  double magnitude(const RFn& f, cplx u) const {
    double r = 0.0;
    if (coeff_plus) r += std::abs(coeff_plus(u)) * f(u + shift);
    if (coeff_minus) r += std::abs(coeff_minus(u)) * f(u - shift);
    if (coeff_zero) r += std::abs(coeff_zero(u)) * f(u);
    return r;
  }
  Op op() const {
    auto self = *this;
    return {[self](const Fn& f, cplx u) { return self(f, u); },
            [self](const RFn& f, cplx u) { return self.magnitude(f, u); }};
  }
  operator Op() const { return op(); }
};

namespace detail {

inline constexpr double theta_zero_tol = 1e-12;

inline cplx nonzero_theta1(cplx x, cplx tau, const char* who) {
  cplx t = theta1(x, tau);
  if (!(std::abs(t) > theta_zero_tol)) throw pole_error(std::string(who) + ": theta1 vanishes at " + to_string(x));
  return t;
}

inline cplx i_delta2(int a) { return a == 2 ? I : cplx(1.0); }

inline void require_index(int a, const char* who) {
  if (a < 0 || a > 3) throw invalid_argument(std::string(who) + ": index must be 0..3");
}

}  // namespace detail

// S_a = i^{delta_{a2}} theta_{a+1}(eta) / theta1(2u)
//       (theta_{a+1}(2u - 2g) e^{eta d} - theta_{a+1}(-2u - 2g) e^{-eta d})
inline ShiftOperator1D s_generator(int a, const SklyaninParams& P) {
  detail::require_index(a, "s_generator");
  cplx c = detail::i_delta2(a) * P.th(a + 1, P.eta);
  cplx g = P.g, tau = P.tau;
  ShiftOperator1D S;
  S.shift = P.eta;
  S.coeff_plus = [=](cplx u) {
    return c * jacobi_theta(a + 1, 2.0 * u - 2.0 * g, tau) / detail::nonzero_theta1(2.0 * u, tau, "s_generator");
  };
  S.coeff_minus = [=](cplx u) {
    return -c * jacobi_theta(a + 1, -2.0 * u - 2.0 * g, tau) / detail::nonzero_theta1(2.0 * u, tau, "s_generator");
  };
  return S;
}

// |(L - R) f(u)| over the larger term scale of the two sides
inline double op_residual(const Op& L, const Op& R, const Fn& f, cplx u) {
  double m = std::max(L.scale(f, u), R.scale(f, u));
  if (m == 0.0) return 0.0;
  return std::abs(L(f, u) - R(f, u)) / m;
}

// sign = +1 checks A B = B A, -1 checks A B = -B A
inline double exchange_residual(const Op& A, const Op& B, double sign, const Fn& f, cplx u) {
  return op_residual(compose(A, B), sign * compose(B, A), f, u);
}

// The six defining relations, in the order
// [S1,S2] = i{S0,S3}, [S0,S1] = i J23 {S2,S3}, then cyclically.
inline std::array<double, 6> sklyanin_relation_residuals(const SklyaninParams& P, const Fn& f, cplx u) {
  Op S[4];
  for (int a = 0; a < 4; ++a) S[a] = s_generator(a, P);
  static constexpr int cyc[3][3] = {{1, 2, 3}, {2, 3, 1}, {3, 1, 2}};
  std::array<double, 6> r{};
  for (int k = 0; k < 3; ++k) {
    int al = cyc[k][0], be = cyc[k][1], ga = cyc[k][2];
    r[2 * k] = op_residual(commutator(S[al], S[be]), I * anticommutator(S[0], S[ga]), f, u);
    r[2 * k + 1] =
        op_residual(commutator(S[0], S[al]), (I * P.Jpair(be, ga)) * anticommutator(S[be], S[ga]), f, u);
  }
  return r;
}

inline double sklyanin_relations_residual(const SklyaninParams& P, const Fn& f, cplx u) {
  auto r = sklyanin_relation_residuals(P, f, u);
  return *std::max_element(r.begin(), r.end());
}

// max over the cyclic pairs of |J_{bc} - (J_c - J_b)/J_a| relative
inline double structure_constant_residual(const SklyaninParams& P) {
  return std::max({rel_diff(P.J23(), P.Jpair_alt(2, 3)), rel_diff(P.J31(), P.Jpair_alt(3, 1)),
                   rel_diff(P.J12(), P.Jpair_alt(1, 2))});
}

struct CasimirResiduals {
  double k0, k2;
};

// K0 = sum_a S_a^2 = 4 theta1(2g+eta)^2, K2 = sum_{a>0} J_a S_a^2 = 4 theta1(2g) theta1(2g+2eta)
inline CasimirResiduals casimir_residuals(const SklyaninParams& P, const Fn& f, cplx u) {
  Op k0 = scalar_op(0.0), k2 = scalar_op(0.0);
  for (int a = 0; a < 4; ++a) {
    Op S = s_generator(a, P);
    Op S2 = compose(S, S);
    k0 = k0 + S2;
    if (a > 0) k2 = k2 + P.J(a) * S2;
  }
  cplx t = theta1(2.0 * P.g + P.eta, P.tau);
  cplx c0 = 4.0 * t * t, c2 = 4.0 * theta1(2.0 * P.g, P.tau) * theta1(2.0 * P.g + 2.0 * P.eta, P.tau);
  return {op_residual(k0, scalar_op(c0), f, u), op_residual(k2, scalar_op(c2), f, u)};
}

// The four b-vectors whose Jacobi identities carry the Casimir computations.
inline std::array<std::array<cplx, 4>, 4> casimir_jacobi_vectors(const SklyaninParams& P, cplx u) {
  cplx e = P.eta, g = P.g;
  return {{{e, e, 2.0 * u - 2.0 * g, 2.0 * u - 2.0 * g + 2.0 * e},
           {e, e, 2.0 * u - 2.0 * g, -2.0 * u - 2.0 * g - 2.0 * e},
           {0.0, 2.0 * e, 2.0 * u - 2.0 * g, -2.0 * u + 2.0 * g - 2.0 * e},
           {0.0, 2.0 * e, 2.0 * u - 2.0 * g, -2.0 * u - 2.0 * g - 2.0 * e}}};
}

// ---- Delta operator ---------------------------------------------------------

using Quad = std::array<cplx, 4>;

// prod theta1(a_j + u)/theta1(2u) e^{eta d} + prod theta1(a_j - u)/theta1(-2u) e^{-eta d}
inline ShiftOperator1D delta_operator(const Quad& A, const SklyaninParams& P) {
  for (auto x : A) require_finite(x, "delta_operator");
  cplx tau = P.tau;
  ShiftOperator1D D;
  D.shift = P.eta;
  D.coeff_plus = [=](cplx u) {
    cplx r = 1.0;
    for (auto x : A) r *= theta1(x + u, tau);
    return r / detail::nonzero_theta1(2.0 * u, tau, "delta_operator");
  };
  D.coeff_minus = [=](cplx u) {
    cplx r = 1.0;
    for (auto x : A) r *= theta1(x - u, tau);
    return r / detail::nonzero_theta1(-2.0 * u, tau, "delta_operator");
  };
  return D;
}

inline void require_delta_sum(const Quad& A, cplx target, const char* who) {
  cplx s = A[0] + A[1] + A[2] + A[3];
  if (!(std::abs(s - target) <= balancing_tol * (1.0 + std::abs(target))))
    throw invalid_argument(std::string(who) + ": parameter sum constraint violated");
}

// Delta as the displayed combination of S_0..S_3; needs sum a = -4g.
inline Op delta_combination(const Quad& A, const SklyaninParams& P) {
  require_delta_sum(A, -4.0 * P.g, "delta_combination");
  cplx tau = P.tau, eta = P.eta, g = P.g, a4 = A[3];
  cplx ph = std::exp(pi * I * (tau / 2.0 + 2.0 * a4 + 2.0 * g - eta));
  auto Pr = [&](cplx sh) {
    cplx r = 1.0;
    for (int j = 0; j < 3; ++j) r *= theta1(A[j] + a4 + 2.0 * g + sh, tau);
    return r;
  };
  cplx h1 = (1.0 + tau) / 2.0, h2 = tau / 2.0;
  cplx c0 = 0.5 * Pr(0.0) / detail::nonzero_theta1(eta, tau, "delta_combination");
  cplx c1 = -0.5 * Pr(0.5) / detail::nonzero_theta1(eta + 0.5, tau, "delta_combination");
  cplx c2 = -0.5 * I * ph * Pr(h1) / detail::nonzero_theta1(eta + h1, tau, "delta_combination");
  cplx c3 = 0.5 * ph * Pr(h2) / detail::nonzero_theta1(eta + h2, tau, "delta_combination");
  return c0 * s_generator(0, P).op() + c1 * s_generator(1, P).op() + c2 * s_generator(2, P).op() +
         c3 * s_generator(3, P).op();
}

inline double delta_equivalence_residual(const Quad& A, const SklyaninParams& P, const Fn& f, cplx u) {
  require_delta_sum(A, -4.0 * P.g, "delta_equivalence_residual");
  return op_residual(delta_operator(A, P), delta_combination(A, P), f, u);
}

// S_a = prefactor * Delta(A) with the listed quadruple (sum -4g).
struct SAsDelta {
  cplx prefactor;
  Quad A;
};

inline SAsDelta s_as_delta(int a, const SklyaninParams& P) {
  detail::require_index(a, "s_as_delta");
  cplx tau = P.tau, eta = P.eta, g = P.g, chi = P.chi();
  cplx ee = std::exp(pi * I * eta);
  switch (a) {
    case 0:
      return {chi * theta1(eta, tau), {-g, 0.5 - g, tau / 2.0 - g, -(1.0 + tau) / 2.0 - g}};
    case 1:
      return {-chi * theta1(eta + 0.5, tau), {0.25 - g, -0.25 - g, 0.25 + tau / 2.0 - g, -0.25 - tau / 2.0 - g}};
    case 2:
      return {chi * ee * theta1(eta + (1.0 + tau) / 2.0, tau),
              {(1.0 + tau) / 4.0 - g, (1.0 - tau) / 4.0 - g, (tau - 1.0) / 4.0 - g, -(1.0 + tau) / 4.0 - g}};
    default:
      return {chi * ee * theta1(eta + tau / 2.0, tau),
              {tau / 4.0 - g, -tau / 4.0 - g, 0.5 + tau / 4.0 - g, -0.5 - tau / 4.0 - g}};
  }
}

inline double s_as_delta_residual(int a, const SklyaninParams& P, const Fn& f, cplx u) {
  auto sd = s_as_delta(a, P);
  return op_residual(s_generator(a, P), sd.prefactor * delta_operator(sd.A, P).op(), f, u);
}

// Delta(a) = (i p^{1/8} (p;p))^3 e^{4 pi i g} D(e^{2 pi i a}; p; shift e^{2 pi i eta})
// at z = e^{2 pi i u}; the shifted arguments of f stay additive.
inline double delta_bridge_residual(const Quad& A, const SklyaninParams& P, const Fn& f, cplx u) {
  require_delta_sum(A, -4.0 * P.g, "delta_bridge_residual");
  auto e = [](cplx x) { return std::exp(2.0 * pi * I * x); };
  cplx p = P.p();
  DOp D{e(A[0]), e(A[1]), e(A[2]), e(A[3]), p, e(P.eta), 1.0};
  auto C = d_coefficients(D, e(u));
  cplx pp = qpochhammer(p, Nome(p));
  cplx k = I * p_eighth(P.tau) * pp;
  cplx rhs = k * k * k * std::exp(4.0 * pi * I * P.g) * (C[0] * f(u + P.eta) + C[1] * f(u - P.eta));
  return rel_diff(delta_operator(A, P)(f, u), rhs);
}

// ---- modular doubles ----------------------------------------------------------

enum class Double { tau_eta_swap, omega_swap };

// tau_eta_swap: S_a with (eta, tau) -> (tau/2, 2 eta), shift tau/2.
// omega_swap: modulus tau/(2 eta), eta -> 1/(4 eta), u -> u/eta, shift 1/2.
inline ShiftOperator1D s_tilde_generator(int a, const SklyaninParams& P, Double d) {
  detail::require_index(a, "s_tilde_generator");
  if (d == Double::tau_eta_swap) return s_generator(a, P.tau_eta_swapped());
  if (P.eta == 0.0) throw regime_error("omega_swap: eta = 0");
  cplx eta = P.eta, g = P.g, tt = P.tau / (2.0 * eta);
  if (!(tt.imag() > 0.0)) throw regime_error("omega_swap: need Im(tau / 2 eta) > 0");
  cplx c = detail::i_delta2(a) * jacobi_theta(a + 1, 1.0 / (4.0 * eta), tt);
  ShiftOperator1D S;
  S.shift = 0.5;
  S.coeff_plus = [=](cplx u) {
    return c * jacobi_theta(a + 1, (u - g) / eta, tt) / detail::nonzero_theta1(u / eta, tt, "s_tilde_generator");
  };
  S.coeff_minus = [=](cplx u) {
    return -c * jacobi_theta(a + 1, (-u - g) / eta, tt) / detail::nonzero_theta1(u / eta, tt, "s_tilde_generator");
  };
  return S;
}

// true when S_a and the partner S~_b commute, false when they anticommute
inline bool cross_commutes(int a, int b, Double d) {
  detail::require_index(a, "cross_commutes");
  detail::require_index(b, "cross_commutes");
  auto grp = [d](int x) { return d == Double::tau_eta_swap ? (x == 0 || x == 3) : (x == 0 || x == 1); };
  return grp(a) == grp(b);
}

inline double cross_commutation_residual(int a, int b, const SklyaninParams& P, Double d, const Fn& f, cplx u) {
  Op S = s_generator(a, P), St = s_tilde_generator(b, P, d);
  return exchange_residual(S, St, cross_commutes(a, b, d) ? 1.0 : -1.0, f, u);
}

// ---- U_q(sl2) endpoint ----------------------------------------------------------

struct UqOps {
  Op k, kinv, E, F;
};

// h = e^{2 pi i eta} = q^{1/2}
inline UqOps uq_sl2_ops(const SklyaninParams& P) {
  cplx eta = P.eta, g = P.g;
  cplx h = std::exp(2.0 * pi * I * eta), d = h - 1.0 / h;
  if (!(std::abs(d) > degenerate_tol)) throw degenerate_error("uq_sl2_ops: q^{1/2} - q^{-1/2} = 0");
  cplx eg = std::exp(2.0 * pi * I * g);
  UqOps o;
  o.k = ShiftOperator1D{eta, [eg](cplx) { return 1.0 / eg; }, {}, {}};
  o.kinv = ShiftOperator1D{eta, {}, [eg](cplx) { return eg; }, {}};
  o.F = ShiftOperator1D{eta, [d](cplx u) { return -std::exp(-2.0 * pi * I * u) / d; },
                        [d](cplx u) { return std::exp(-2.0 * pi * I * u) / d; }, {}};
  o.E = ShiftOperator1D{eta, [d, eg](cplx u) { return std::exp(2.0 * pi * I * u) / (eg * eg) / d; },
                        [d, eg](cplx u) { return -std::exp(2.0 * pi * I * u) * eg * eg / d; }, {}};
  return o;
}

// The tilde triple: shift 1/2, q~^{1/2} = e^{-pi i/(2 eta)}.
inline UqOps uq_tilde_ops(const SklyaninParams& P) {
  cplx eta = P.eta, g = P.g;
  if (eta == 0.0) throw degenerate_error("uq_tilde_ops: eta = 0");
  cplx ht = std::exp(-0.5 * pi * I / eta), d = 1.0 / ht - ht;
  if (!(std::abs(d) > degenerate_tol)) throw degenerate_error("uq_tilde_ops: q~^{1/2} - q~^{-1/2} = 0");
  cplx eg = std::exp(pi * I * g / eta);
  UqOps o;
  o.k = ShiftOperator1D{0.5, [eg](cplx) { return 1.0 / eg; }, {}, {}};
  o.kinv = ShiftOperator1D{0.5, {}, [eg](cplx) { return eg; }, {}};
  o.F = ShiftOperator1D{0.5, [d, eta](cplx u) { return -std::exp(-pi * I * u / eta) / d; },
                        [d, eta](cplx u) { return std::exp(-pi * I * u / eta) / d; }, {}};
  o.E = ShiftOperator1D{0.5, [d, eg, eta](cplx u) { return std::exp(pi * I * u / eta) / (eg * eg) / d; },
                        [d, eg, eta](cplx u) { return -std::exp(pi * I * u / eta) * eg * eg / d; }, {}};
  return o;
}

struct UqResiduals {
  std::array<double, 3> uq;      // kE = hEk, kF = Fk/h, [E,F] = (k^2 - k^-2)/(h - 1/h)
  std::array<double, 3> tilde;   // same with h -> 1/h~
  std::array<double, 4> anti;    // kF~, kE~, k~F, k~E anticommute
  std::array<double, 9> comm;    // K E~, K F~, K~ E, K~ F, E E~, E F~, F E~, F F~, K K~
  double max() const {
    double m = 0.0;
    for (auto v : uq) m = std::max(m, v);
    for (auto v : tilde) m = std::max(m, v);
    for (auto v : anti) m = std::max(m, v);
    for (auto v : comm) m = std::max(m, v);
    return m;
  }
};

inline UqResiduals uq_relations_residual(const SklyaninParams& P, const Fn& f, cplx u) {
  UqOps a = uq_sl2_ops(P), t = uq_tilde_ops(P);
  cplx h = std::exp(2.0 * pi * I * P.eta), ht = std::exp(-0.5 * pi * I / P.eta);
  auto C = compose;
  auto anti = [&](const Op& A, const Op& B) { return exchange_residual(A, B, -1.0, f, u); };
  auto comm = [&](const Op& A, const Op& B) { return exchange_residual(A, B, 1.0, f, u); };
  UqResiduals r;
  r.uq = {op_residual(C(a.k, a.E), h * C(a.E, a.k), f, u), op_residual(C(a.k, a.F), (1.0 / h) * C(a.F, a.k), f, u),
          op_residual(commutator(a.E, a.F), (1.0 / (h - 1.0 / h)) * (C(a.k, a.k) - C(a.kinv, a.kinv)), f, u)};
  r.tilde = {op_residual(C(t.k, t.E), (1.0 / ht) * C(t.E, t.k), f, u),
             op_residual(C(t.k, t.F), ht * C(t.F, t.k), f, u),
             op_residual(commutator(t.E, t.F), (1.0 / (1.0 / ht - ht)) * (C(t.k, t.k) - C(t.kinv, t.kinv)), f, u)};
  r.anti = {anti(a.k, t.F), anti(a.k, t.E), anti(t.k, a.F), anti(t.k, a.E)};
  Op K = C(a.k, a.k), Kt = C(t.k, t.k);
  r.comm = {comm(K, t.E), comm(K, t.F), comm(Kt, a.E), comm(Kt, a.F), comm(a.E, t.E),
            comm(a.E, t.F), comm(a.F, t.E), comm(a.F, t.F), comm(K, Kt)};
  return r;
}

}  // namespace ellhyp
