#pragma once
// Elliptic hypergeometric integrals I^(m), the elliptic beta integral, the
// V-function with its E7 transformations, contiguous relations and the
// elliptic hypergeometric equation.

#include <array>
#include <vector>

#include "quadrature.hpp"

namespace ellhyp {

using Params6 = std::array<cplx, 6>;
using Params8 = std::array<cplx, 8>;

inline constexpr double balancing_tol = 1e-12;
inline constexpr double degenerate_tol = 1e-10;

template <class C>
cplx product(const C& t) {
  cplx r = 1.0;
  for (auto x : t) r *= x;
  return r;
}

template <class C>
void require_balancing(const C& t, cplx target, const char* who) {
  cplx pr = product(t);
  if (!(std::abs(pr / target - 1.0) <= balancing_tol))
    throw invalid_argument(std::string(who) + ": balancing condition violated (product " + to_string(pr) +
                           ", expected " + to_string(target) + ")");
}

template <class C>
void require_admissible(const C& t, double margin, const char* who) {
  int i = 0;
  for (auto x : t) {
    ++i;
    if (!(std::abs(x) <= 1.0 - margin))
      throw inadmissible_error(std::string(who) + ": parameter " + std::to_string(i) + " = " + to_string(x) +
                               " violates the pole margin |t| <= " + std::to_string(1.0 - margin));
  }
}

inline void require_nonzero(cplx v, const char* who) {
  if (!(std::abs(v) > degenerate_tol)) throw degenerate_error(std::string(who) + ": vanishing theta factor");
}

// ---- I^(m) and the elliptic beta integral -----------------------------------

struct BalancedParams {
  int m;
  std::vector<cplx> t;
  BasePair bases;

  BalancedParams(int m_, std::vector<cplx> t_, BasePair b) : m(m_), t(std::move(t_)), bases(b) {
    if (m < 0) throw invalid_argument("BalancedParams: m must be >= 0");
    if (t.size() != static_cast<std::size_t>(2 * m + 6))
      throw invalid_argument("BalancedParams: need 2m+6 parameters");
    require_balancing(t, std::pow(bases.pq(), m + 1), "BalancedParams");
  }
  // sqrt(t_{2m+5} ... t_{2m+8} / pq), principal branch (needs m >= 1)
  cplx epsilon() const {
    if (m < 1) throw invalid_argument("BalancedParams: epsilon needs m >= 1");
    std::size_t n = t.size();
    return std::sqrt(t[n - 4] * t[n - 3] * t[n - 2] * t[n - 1] / bases.pq());
  }
};

template <class C>
cplx ihm_integrand(const C& t, cplx z, const BasePair& b) {
  cplx r = gamma_weight(z, b);
  for (auto x : t) r *= gamma_pm(x, z, b);
  return r;
}

inline cplx elliptic_beta_closed(const Params6& t, const BasePair& b) {
  require_balancing(t, b.pq(), "elliptic_beta_closed");
  cplx r = 1.0;
  for (int j = 0; j < 6; ++j)
    for (int k = j + 1; k < 6; ++k) r *= gamma_pq(t[j] * t[k], b);
  return r;
}

template <class C>
QuadratureResult integrate_params(const C& t, const BasePair& b, const QuadratureSpec& spec) {
  auto q = circle_mean([&](cplx z) { return ihm_integrand(t, z, b); }, spec);
  q.value *= kappa_mean_factor(b);
  return q;
}

inline QuadratureResult ihm_integral(const BalancedParams& P, const QuadratureSpec& spec = {}) {
  require_admissible(P.t, spec.margin, "ihm_integral");
  return integrate_params(P.t, P.bases, spec);
}

// V(t) = I^(1)(t), balancing (pq)^2
inline QuadratureResult v_quad(const Params8& t, const BasePair& b, const QuadratureSpec& spec = {}) {
  require_balancing(t, b.pq() * b.pq(), "v_function");
  require_admissible(t, spec.margin, "v_function");
  return integrate_params(t, b, spec);
}

inline cplx v_function(const Params8& t, const BasePair& b, const QuadratureSpec& spec = {}) {
  return v_quad(t, b, spec).value;
}

// ---- Bailey step m=0 --------------------------------------------------------

// I^(1)(t) against prod_{5<=k<l<=8} Gamma(t_k t_l)/Gamma(eps^2) times
// kappa int prod_{k>=5} Gamma(t_k eps^{-1} w^+-) I^(0)(t1..t4, eps w^+-)/Gamma(w^+-2),
// with I^(0) replaced by its closed form.
inline Residual bailey_step_residual(const Params8& t, const BasePair& b, const QuadratureSpec& outer,
                                     const QuadratureSpec& inner) {
  require_balancing(t, b.pq() * b.pq(), "bailey_step");
  cplx eps = std::sqrt(t[4] * t[5] * t[6] * t[7] / b.pq());
  for (int k = 4; k < 8; ++k)
    if (!(std::abs(t[k] / eps) <= 1.0 - outer.margin))
      throw inadmissible_error("bailey_step: |t_k/eps| exceeds the pole margin");
  for (int k = 0; k < 4; ++k)
    if (!(std::abs(t[k] * eps) <= 1.0 - outer.margin))
      throw inadmissible_error("bailey_step: |t_i eps| exceeds the pole margin");
  auto lhs = v_quad(t, b, inner);
  auto rq = circle_mean(
      [&](cplx w) {
        cplx r = gamma_weight(w, b);
        for (int k = 4; k < 8; ++k) r *= gamma_pm(t[k] / eps, w, b);
        std::array<cplx, 6> u{t[0], t[1], t[2], t[3], eps * w, eps / w};
        for (int i = 0; i < 6; ++i)
          for (int j = i + 1; j < 6; ++j) r *= gamma_pq(u[i] * u[j], b);
        return r;
      },
      outer);
  cplx pre = 1.0 / gamma_pq(eps * eps, b);
  for (int k = 4; k < 8; ++k)
    for (int l = k + 1; l < 8; ++l) pre *= gamma_pq(t[k] * t[l], b);
  cplx rhs = pre * kappa_mean_factor(b) * rq.value;
  Residual r(std::abs(lhs.value - rhs) / std::abs(lhs.value));
  r.nodes_used = std::max(lhs.nodes_used, rq.nodes_used);
  r.converged = lhs.converged && rq.converged;
  return r;
}

// ---- E7 transformations -----------------------------------------------------

enum class E7Kind { first, second, third };

struct E7Image {
  Params8 t;
  cplx prefactor;
};

// V(t) = prefactor * V(t')
inline E7Image e7_transform(const Params8& t, E7Kind which, const BasePair& b, double margin = 0.05) {
  require_balancing(t, b.pq() * b.pq(), "e7_transform");
  E7Image out{};
  cplx pre = 1.0;
  switch (which) {
    case E7Kind::first: {
      cplx e = std::sqrt(t[4] * t[5] * t[6] * t[7] / b.pq());
      for (int k = 0; k < 4; ++k) {
        out.t[k] = e * t[k];
        out.t[k + 4] = t[k + 4] / e;
      }
      for (int k = 0; k < 4; ++k)
        for (int l = k + 1; l < 4; ++l) pre *= gamma_pq(t[k] * t[l], b) * gamma_pq(t[k + 4] * t[l + 4], b);
      break;
    }
    case E7Kind::second: {
      cplx sT = std::sqrt(t[0] * t[1] * t[2] * t[3]), sU = std::sqrt(t[4] * t[5] * t[6] * t[7]);
      for (int k = 0; k < 4; ++k) {
        out.t[k] = sT / t[k];
        out.t[k + 4] = sU / t[k + 4];
      }
      for (int j = 0; j < 4; ++j)
        for (int k = 4; k < 8; ++k) pre *= gamma_pq(t[j] * t[k], b);
      break;
    }
    case E7Kind::third: {
      cplx s = std::sqrt(b.pq());
      for (int k = 0; k < 8; ++k) out.t[k] = s / t[k];
      for (int j = 0; j < 8; ++j)
        for (int k = j + 1; k < 8; ++k) pre *= gamma_pq(t[j] * t[k], b);
      break;
    }
  }
  out.prefactor = pre;
  require_admissible(out.t, margin, "e7_transform image");
  return out;
}

inline Residual e7_residual(const Params8& t, E7Kind which, const BasePair& b, const QuadratureSpec& spec = {}) {
  auto img = e7_transform(t, which, b, spec.margin);
  auto v0 = v_quad(t, b, spec);
  auto v1 = v_quad(img.t, b, spec);
  Residual r(std::abs(v0.value - img.prefactor * v1.value) / std::abs(v0.value));
  r.merge(v0).merge(v1);
  return r;
}

// ---- contiguous relations ---------------------------------------------------

namespace detail {

inline Params8 scaled(Params8 t, int i, cplx f) {
  t[i] *= f;
  return t;
}
inline Params8 scaled(Params8 t, int i, cplx f, int j, cplx g) {
  t[i] *= f;
  t[j] *= g;
  return t;
}
inline Params8 swap78(Params8 t) {
  std::swap(t[6], t[7]);
  return t;
}

struct VSet {
  std::vector<QuadratureResult> runs;
  cplx operator()(const Params8& t, const BasePair& b, const QuadratureSpec& spec) {
    runs.push_back(v_quad(t, b, spec));
    return runs.back().value;
  }
  Residual wrap(double v) const {
    Residual r(v);
    for (auto& q : runs) r.merge(q);
    return r;
  }
};

}  // namespace detail

// t7 theta(t8 t7^+-) V(q t6) - t6 theta(t8 t6^+-) V(q t7) - t7 theta(t6 t7^+-) V(q t8) = 0,
// prod t = p^2 q
inline Residual contiguous_c1_residual(const Params8& t, const BasePair& b, const QuadratureSpec& spec = {}) {
  require_balancing(t, b.p * b.p * b.q, "contiguous_c1");
  auto n = b.nome_p();
  detail::VSet V;
  cplx A = t[6] * theta_pm(t[7], t[6], n) * V(detail::scaled(t, 5, b.q), b, spec);
  cplx B = -t[5] * theta_pm(t[7], t[5], n) * V(detail::scaled(t, 6, b.q), b, spec);
  cplx C = -t[6] * theta_pm(t[5], t[6], n) * V(detail::scaled(t, 7, b.q), b, spec);
  return V.wrap(term_residual({A, B, C}));
}

// prod t = p^2
inline Residual eq2_residual(const Params8& t, const BasePair& b, const QuadratureSpec& spec = {}) {
  require_balancing(t, b.p * b.p, "eq2");
  auto n = b.nome_p();
  auto P5 = [&](cplx x) {
    cplx r = 1.0;
    for (int k = 0; k < 5; ++k) r *= theta(x * t[k], n);
    return r;
  };
  const cplx q = b.q;
  detail::VSet V;
  cplx A = t[5] * theta(t[6] / t[7], n) * P5(t[5]) * V(detail::scaled(t, 6, q, 7, q), b, spec);
  cplx B = -t[6] * theta(t[5] / t[7], n) * P5(t[6]) * V(detail::scaled(t, 5, q, 7, q), b, spec);
  cplx C = -t[5] * theta(t[6] / t[5], n) * P5(t[7]) * V(detail::scaled(t, 5, q, 6, q), b, spec);
  return V.wrap(term_residual({A, B, C}));
}

// prod t = p^2 q^2
inline Residual key_cont_residual(const Params8& t, const BasePair& b, const QuadratureSpec& spec = {}) {
  require_balancing(t, b.pq() * b.pq(), "key_cont");
  auto n = b.nome_p();
  const cplx q = b.q;
  auto [t1, t2, t3, t4, t5, t6, t7, t8] = t;
  (void)t1, (void)t2, (void)t3, (void)t4;
  cplx r5 = 1.0, r6 = 1.0;
  for (int j = 0; j < 4; ++j) {
    r5 *= theta(t5 * t[j] / q, n) / theta(t7 * t[j] / q, n);
    r6 *= theta(t6 * t[j], n) / theta(t7 * t[j] / q, n);
  }
  detail::VSet V;
  cplx v0 = V(t, b, spec);
  cplx L1 = thetas(n, t7 * t6 / q, t7 / (t6 * q)) / thetas(n, t8 * t6, t8 / t6) *
            V(detail::scaled(t, 6, 1.0 / q, 7, q), b, spec);
  cplx R1 = thetas(n, t7 / (q * t6), t5 * t8 / q, q * t8 / t7) / thetas(n, t8 * t6, t8 / t6, q * t6 / t5) * r5 *
            V(detail::scaled(t, 4, 1.0 / q, 5, q), b, spec);
  cplx R2 = thetas(n, q * t8 / t7, t7 / t5) / thetas(n, t8 / t6, q * t6 / t5) * r6 * v0;
  return V.wrap(term_residual({L1, -v0, -R1, R2}));
}

// ---- elliptic hypergeometric equation ---------------------------------------

// coefficient a(t) of T_{x,q} in D(t)
inline cplx eh_a(const Params8& t, const BasePair& b) {
  auto n = b.nome_p();
  const cplx q = b.q;
  cplx r = thetas(n, t[7] / (q * t[5]), t[5] * t[7], t[5] / t[7]) / thetas(n, t[7] / t[6], t[6] / (q * t[7]));
  for (int k = 0; k < 5; ++k) r *= theta(t[6] * t[k] / q, n);
  return r;
}

inline cplx eh_kappa(const Params8& t, const BasePair& b) {
  auto n = b.nome_p();
  cplx r = theta(t[6] * t[7] / b.q, n);
  for (int k = 0; k < 5; ++k) r *= theta(t[5] * t[k], n);
  return r;
}

// potential A(t) = a(t) / kappa(t)
inline cplx eh_potential(const Params8& t, const BasePair& b) { return eh_a(t, b) / eh_kappa(t, b); }

// coefficients of (T_{x,q}, T_{x,q}^{-1}, 1) in D(t)
inline std::array<cplx, 3> eh_operator_coefficients(const Params8& t, const BasePair& b) {
  auto n = b.nome_p();
  require_nonzero(theta(t[7] / t[6], n), "eh_operator");
  require_nonzero(theta(t[6] / t[7], n), "eh_operator");
  cplx A = eh_a(t, b), B = eh_a(detail::swap78(t), b);
  return {A, B, eh_kappa(t, b) - A - B};
}

// Gamma(t7 t6^+-, t8 t6^+-)
inline cplx u_normalizer(const Params8& t, const BasePair& b) {
  return gamma_pm(t[6], t[5], b) * gamma_pm(t[7], t[5], b);
}

inline QuadratureResult u_quad(const Params8& t, const BasePair& b, const QuadratureSpec& spec) {
  auto r = v_quad(t, b, spec);
  r.value /= u_normalizer(t, b);
  return r;
}

inline Params8 eh_params(const Params6& t6, cplx c, cplx x) {
  return {t6[0], t6[1], t6[2], t6[3], t6[4], t6[5], c / x, c * x};
}

// D(t) U(t) = 0 with t7 = c/x, t8 = c x; T_{x,q} maps (t7, t8) -> (t7/q, q t8)
inline Residual eheq_residual(const Params6& t6, cplx c, cplx x, const BasePair& b, const QuadratureSpec& spec = {}) {
  Params8 t = eh_params(t6, c, x);
  require_balancing(t, b.pq() * b.pq(), "eheq");
  auto C = eh_operator_coefficients(t, b);
  const cplx q = b.q;
  auto u0 = u_quad(t, b, spec);
  auto up = u_quad(detail::scaled(t, 6, 1.0 / q, 7, q), b, spec);
  auto um = u_quad(detail::scaled(t, 6, q, 7, 1.0 / q), b, spec);
  Residual r(term_residual({C[0] * up.value, C[1] * um.value, C[2] * u0.value}));
  r.merge(u0).merge(up).merge(um);
  return r;
}

// (eh) form: A(t)(theta(t7 t6^+-/q)/theta(t8 t6^+-) V(t7/q, q t8) - V) + (t7<->t8) + V = 0
inline Residual eh_residual(const Params8& t, const BasePair& b, const QuadratureSpec& spec = {}) {
  require_balancing(t, b.pq() * b.pq(), "eh");
  auto n = b.nome_p();
  const cplx q = b.q;
  detail::VSet V;
  cplx v0 = V(t, b, spec);
  cplx A7 = eh_potential(t, b), A8 = eh_potential(detail::swap78(t), b);
  cplx c7 = thetas(n, t[6] * t[5] / q, t[6] / (t[5] * q)) / thetas(n, t[7] * t[5], t[7] / t[5]);
  cplx c8 = thetas(n, t[7] * t[5] / q, t[7] / (t[5] * q)) / thetas(n, t[6] * t[5], t[6] / t[5]);
  cplx v7 = V(detail::scaled(t, 6, 1.0 / q, 7, q), b, spec);
  cplx v8 = V(detail::scaled(t, 6, q, 7, 1.0 / q), b, spec);
  return V.wrap(term_residual({A7 * c7 * v7, -A7 * v0, A8 * c8 * v8, -A8 * v0, v0}));
}

// Term-by-term match of (eh) against kappa^{-1} Gamma_norm(x) D(t) acting on U:
// the three V-coefficients must coincide. Pure theta/gamma arithmetic.
inline double eh_consistency_residual(const Params6& t6, cplx c, cplx x, const BasePair& b) {
  Params8 t = eh_params(t6, c, x);
  auto n = b.nome_p();
  const cplx q = b.q;
  auto C = eh_operator_coefficients(t, b);
  cplx k = eh_kappa(t, b);
  Params8 tp = detail::scaled(t, 6, 1.0 / q, 7, q), tm = detail::scaled(t, 6, q, 7, 1.0 / q);
  cplx g0 = u_normalizer(t, b);
  std::array<cplx, 3> fromD{C[0] * g0 / u_normalizer(tp, b) / k, C[1] * g0 / u_normalizer(tm, b) / k, C[2] / k};
  cplx A7 = eh_potential(t, b), A8 = eh_potential(detail::swap78(t), b);
  std::array<cplx, 3> fromEh{
      A7 * thetas(n, t[6] * t[5] / q, t[6] / (t[5] * q)) / thetas(n, t[7] * t[5], t[7] / t[5]),
      A8 * thetas(n, t[7] * t[5] / q, t[7] / (t[5] * q)) / thetas(n, t[6] * t[5], t[6] / t[5]), 1.0 - A7 - A8};
  double r = 0.0;
  for (int i = 0; i < 3; ++i) r = std::max(r, rel_diff(fromD[i], fromEh[i]));
  return r;
}

namespace detail {
inline Params8 with34(Params8 t, cplx a, cplx b) {
  t[2] = a;
  t[3] = b;
  return t;
}
inline void require_pair(const Params8& t, cplx a, cplx b, const char* who) {
  if (!(std::abs(a * b / (t[2] * t[3]) - 1.0) <= balancing_tol))
    throw invalid_argument(std::string(who) + ": need t3 t4 = t3' t4'");
}
}  // namespace detail

// D(t') - th(t3/t3', t3/t4')/th(t3/t3'', t3/t4'') D(t'') = t3/t3' th(t3'/t3'', t3'/t4'')/th(t3/t3'', t3/t4'') D(t),
// compared slot by slot; t7, t8 carry the point x.
inline double op_ident_residual(const Params8& t, cplx t3p, cplx t4p, cplx t3pp, cplx t4pp, const BasePair& b) {
  detail::require_pair(t, t3p, t4p, "op_ident");
  detail::require_pair(t, t3pp, t4pp, "op_ident");
  auto n = b.nome_p();
  cplx t3 = t[2];
  cplx den = thetas(n, t3 / t3pp, t3 / t4pp);
  require_nonzero(den, "op_ident");
  cplx lead = thetas(n, t3p / t3pp, t3p / t4pp);
  if (!(std::abs(lead) > degenerate_tol)) throw degenerate_error("op_ident: t3'' = t3' makes both sides vanish");
  cplx ratio = thetas(n, t3 / t3p, t3 / t4p) / den;
  cplx rfac = t3 / t3p * lead / den;
  auto Cp = eh_operator_coefficients(detail::with34(t, t3p, t4p), b);
  auto Cpp = eh_operator_coefficients(detail::with34(t, t3pp, t4pp), b);
  auto C = eh_operator_coefficients(t, b);
  double r = 0.0;
  for (int i = 0; i < 3; ++i) {
    cplx lhs = Cp[i] - ratio * Cpp[i], rhs = rfac * C[i];
    double s = std::max({std::abs(Cp[i]), std::abs(ratio * Cpp[i]), std::abs(rhs)});
    r = std::max(r, std::abs(lhs - rhs) / s);
  }
  return r;
}

inline double op_ident_residual(const Params6& t6, cplx c, cplx x, cplx t3p, cplx t4p, cplx t3pp, cplx t4pp,
                                const BasePair& b) {
  return op_ident_residual(eh_params(t6, c, x), t3p, t4p, t3pp, t4pp, b);
}

namespace detail {

struct UValues {
  QuadratureResult u0, up, um;
};

inline UValues u_triplet(const Params8& t, const BasePair& b, const QuadratureSpec& spec) {
  const cplx q = b.q;
  return {u_quad(t, b, spec), u_quad(scaled(t, 6, 1.0 / q, 7, q), b, spec), u_quad(scaled(t, 6, q, 7, 1.0 / q), b, spec)};
}

// D(t') applied to U(t) using precomputed shifts
inline cplx apply_d(const Params8& tops, const UValues& u, const BasePair& b) {
  auto C = eh_operator_coefficients(tops, b);
  return C[0] * u.up.value + C[1] * u.um.value + C[2] * u.u0.value;
}

}  // namespace detail

struct KeyEheqTerms {
  cplx lhs, c5, c0;  // lhs = c5 U(t5/q, q t6) + c0 U(t)
};

// coefficients of the right side of key-eheq; the U(t5/q, q t6) coefficient
// carries no theta(t7 t8/q) factor
inline KeyEheqTerms key_eheq_coefficients(const Params8& t, const BasePair& b) {
  auto n = b.nome_p();
  const cplx q = b.q;
  auto [t1, t2, t3, t4, t5, t6, t7, t8] = t;
  (void)t1, (void)t2;
  cplx c5 = t4 * t6 * thetas(n, t3 * t4 * t7 * t8 / (q * q), t7 * t6, t8 * t6) /
            thetas(n, t3 * t7 / q, t3 * t8 / q, t4 * t7 / q, t4 * t8 / q, q * t6 / t5);
  for (int j : {0, 1, 2, 3, 6, 7}) c5 *= theta(t5 * t[j] / q, n);
  cplx pre = theta(q * t6 / t8, n) / thetas(n, t3 * t8 / q, q / (t4 * t8));
  for (int j = 0; j < 4; ++j) pre *= theta(t6 * t[j], n);
  cplx inner = thetas(n, t6 * t8, t7 / t5, t5 * t7 / q, t3 * t4 * t7 * t8 / (q * q)) /
                   thetas(n, q * t6 / t5, t3 * t7 / q, t4 * t7 / q) -
               thetas(n, t7 * t8 / q, t5 * t6, t3 * t4 * t6 * t8 / q) / thetas(n, t3 * t6, t4 * t6);
  return {0.0, c5, -pre * inner};
}

// D(t')U(t)/theta(t3/t3', t3/t4') = c5 U(t5/q, q t6) + c0 U(t), prod t = p^2 q^2
inline Residual key_eheq_residual(const Params8& t, cplx t3p, cplx t4p, const BasePair& b,
                                  const QuadratureSpec& spec = {}) {
  require_balancing(t, b.pq() * b.pq(), "key_eheq");
  detail::require_pair(t, t3p, t4p, "key_eheq");
  auto n = b.nome_p();
  cplx den = thetas(n, t[2] / t3p, t[2] / t4p);
  if (!(std::abs(den) > degenerate_tol)) throw degenerate_error("key_eheq: theta(t3/t3', t3/t4') vanishes");
  auto u = detail::u_triplet(t, b, spec);
  auto u5 = u_quad(detail::scaled(t, 4, 1.0 / b.q, 5, b.q), b, spec);
  cplx lhs = detail::apply_d(detail::with34(t, t3p, t4p), u, b) / den;
  auto K = key_eheq_coefficients(t, b);
  cplx r1 = K.c5 * u5.value, r2 = K.c0 * u.u0.value;
  Residual r(std::abs(lhs - r1 - r2) / std::max({std::abs(lhs), std::abs(r1), std::abs(r2)}));
  r.merge(u.u0).merge(u.up).merge(u.um).merge(u5);
  return r;
}

// left side of key-eheq for two auxiliary choices t3', t3''
inline Residual key_eheq_independence(const Params8& t, cplx t3p, cplx t3pp, const BasePair& b,
                                      const QuadratureSpec& spec = {}) {
  require_balancing(t, b.pq() * b.pq(), "key_eheq");
  auto n = b.nome_p();
  cplx t4p = t[2] * t[3] / t3p, t4pp = t[2] * t[3] / t3pp;
  cplx d1 = thetas(n, t[2] / t3p, t[2] / t4p), d2 = thetas(n, t[2] / t3pp, t[2] / t4pp);
  if (!(std::abs(d1) > degenerate_tol) || !(std::abs(d2) > degenerate_tol))
    throw degenerate_error("key_eheq: vanishing normalization");
  auto u = detail::u_triplet(t, b, spec);
  cplx l1 = detail::apply_d(detail::with34(t, t3p, t4p), u, b) / d1;
  cplx l2 = detail::apply_d(detail::with34(t, t3pp, t4pp), u, b) / d2;
  Residual r(rel_diff(l1, l2));
  r.merge(u.u0).merge(u.up).merge(u.um);
  return r;
}

// ---- the epsilon parametrization --------------------------------------------

struct EpsilonParams {
  std::array<cplx, 8> eps;
  cplx c;  // explicit branch, c^2 = eps6 eps8 / p^4
  BasePair bases;

  EpsilonParams(std::array<cplx, 8> e, cplx c_, BasePair b) : eps(e), c(c_), bases(b) {
    require_balancing(eps, b.pq() * b.pq(), "EpsilonParams");
    cplx p4 = b.p * b.p * b.p * b.p;
    if (!(std::abs(c * c * p4 / (eps[5] * eps[7]) - 1.0) <= balancing_tol))
      throw invalid_argument("EpsilonParams: c^2 must equal eps6 eps8 / p^4");
  }

  // eps_k = q/(c t_k) (k <= 5), eps6 = c t6 p^4, eps8 = c/t6, eps7 = eps8/q
  static EpsilonParams from_t(const Params6& t, cplx c, const BasePair& b) {
    std::array<cplx, 8> e{};
    for (int k = 0; k < 5; ++k) e[k] = b.q / (c * t[k]);
    cplx p4 = b.p * b.p * b.p * b.p;
    e[5] = c * t[5] * p4;
    e[7] = c / t[5];
    e[6] = e[7] / b.q;
    return EpsilonParams(e, c, b);
  }

  Params6 to_t() const {
    Params6 t{};
    for (int k = 0; k < 5; ++k) t[k] = bases.q / (c * eps[k]);
    t[5] = c / eps[7];
    return t;
  }

  cplx A(cplx x) const {
    auto n = bases.nome_p();
    cplx r = 1.0;
    for (auto e : eps) r *= theta(e * x, n);
    cplx d = thetas(n, x * x, bases.q * x * x);
    if (!(std::abs(d) > degenerate_tol)) throw pole_error("EpsilonParams::A: pole at x");
    return r / d;
  }
  // A(x) and A(1/x) times the weight 1/Gamma(x^{+-2}), regular at x = +-1
  std::array<cplx, 2> A_weighted(cplx x) const {
    auto n = bases.nome_p();
    cplx up = 1.0, dn = 1.0;
    for (auto e : eps) {
      up *= theta(e * x, n);
      dn *= theta(e / x, n);
    }
    cplx tq = theta(1.0 / (x * x), bases.nome_q());
    cplx d1 = theta(bases.q * x * x, n), d2 = theta(bases.q / (x * x), n);
    if (!(std::abs(d1) > degenerate_tol) || !(std::abs(d2) > degenerate_tol))
      throw pole_error("EpsilonParams::A: pole at x");
    return {up / d1 * tq, -x * x * dn / d2 * tq};
  }
  cplx nu() const {
    auto n = bases.nome_p();
    cplx r = 1.0;
    for (int k = 0; k < 6; ++k) r *= theta(eps[k] * eps[7] / bases.q, n);
    return r;
  }
  cplx alpha(cplx x) const {
    cplx r = 1.0;
    for (auto e : eps) r *= gamma_pm(e, x, bases);
    return r;
  }
};

inline cplx dx_operator_apply(const EpsilonParams& E, const Fn& f, cplx x) {
  const cplx q = E.bases.q;
  cplx f0 = f(x);
  return E.A(x) * (f(q * x) - f0) + E.A(1.0 / x) * (f(x / q) - f0) + E.nu() * f0;
}

// alpha(x) D_x alpha(x)^{-1}
inline cplx dx_conjugate_apply(const EpsilonParams& E, const Fn& f, cplx x) {
  Fn g = [&](cplx y) { return f(y) / E.alpha(y); };
  return E.alpha(x) * dx_operator_apply(E, g, x);
}

// weight(x) D_x f(x), finite on the whole unit circle
inline cplx dx_operator_apply_weighted(const EpsilonParams& E, const Fn& f, cplx x) {
  const cplx q = E.bases.q;
  auto A = E.A_weighted(x);
  cplx f0 = f(x);
  return A[0] * (f(q * x) - f0) + A[1] * (f(x / q) - f0) + E.nu() * f0 * gamma_weight(x, E.bases);
}

// <chi, D psi> against <D* chi, psi> on the unit circle
inline Residual dx_adjoint_residual(const EpsilonParams& E, const Fn& chi, const Fn& psi,
                                    const QuadratureSpec& spec = {}) {
  auto L = circle_mean([&](cplx z) { return chi(z) * dx_operator_apply_weighted(E, psi, z); }, spec);
  auto R = circle_mean(
      [&](cplx z) {
        Fn g = [&](cplx y) { return chi(y) / E.alpha(y); };
        return E.alpha(z) * dx_operator_apply_weighted(E, g, z) * psi(z);
      },
      spec);
  Residual r(rel_diff(L.value, R.value));
  r.merge(L).merge(R);
  return r;
}

// psi(x; eps) = U(t1..t6, c x, c/x)
inline QuadratureResult dx_psi(const EpsilonParams& E, cplx x, const QuadratureSpec& spec = {}) {
  Params6 t = E.to_t();
  return u_quad({t[0], t[1], t[2], t[3], t[4], t[5], E.c * x, E.c / x}, E.bases, spec);
}

inline Residual dx_psi_residual(const EpsilonParams& E, cplx x, const QuadratureSpec& spec = {}) {
  const cplx q = E.bases.q;
  auto p0 = dx_psi(E, x, spec), pp = dx_psi(E, q * x, spec), pm = dx_psi(E, x / q, spec);
  cplx a = E.A(x), ai = E.A(1.0 / x);
  Residual r(term_residual({a * pp.value, -a * p0.value, ai * pm.value, -ai * p0.value, E.nu() * p0.value}));
  r.merge(p0).merge(pp).merge(pm);
  return r;
}

// Conditions for <chi(eps'), D_x(eps') psi(eps)> to be a legitimate unit-circle
// pairing: chi and psi pole-free on |q| <= |x| <= 1/|q|.
inline void eheq_bio_admissibility(const EpsilonParams& E, const EpsilonParams& Ep, double margin) {
  const double aq = std::abs(E.bases.q);
  for (auto* P : {&E, &Ep}) {
    if (!(std::abs(P->c) <= aq * (1.0 - margin)))
      throw inadmissible_error("eheq_bio: U(.., c x, c/x) needs |c| < |q| for poles to clear the annulus");
  }
  for (auto e : Ep.eps)
    if (!(std::abs(e) <= aq * (1.0 - margin)))
      throw inadmissible_error("eheq_bio: alpha(x; eps') needs |eps_k| < |q|; with |c| < |q| this forces |c t_k| > 1");
}

// <chi(x;eps'), D_x(eps') psi(x;eps)> with beta = 1 and its integrand scale.
struct BioValue {
  cplx value;
  double scale;
  int nodes_used;
};

inline BioValue eheq_bio_value(const EpsilonParams& E, const EpsilonParams& Ep, const QuadratureSpec& outer,
                               const QuadratureSpec& inner, bool enforce_admissibility = true) {
  if (enforce_admissibility) eheq_bio_admissibility(E, Ep, outer.margin);
  const BasePair& b = E.bases;
  Params6 tp = Ep.to_t();
  auto r = circle_mean(
      [&](cplx x) {
        cplx Dpsi = dx_operator_apply_weighted(Ep, [&](cplx y) { return dx_psi(E, y, inner).value; }, x);
        cplx chi = Ep.alpha(x) * u_quad({tp[0], tp[1], tp[2], tp[3], tp[4], tp[5], Ep.c / x, Ep.c * x}, b, inner).value;
        return chi * Dpsi;
      },
      outer);
  cplx k = kappa_mean_factor(b);
  return {r.value * k, r.abs_mean * std::abs(k), r.nodes_used};
}

}  // namespace ellhyp
