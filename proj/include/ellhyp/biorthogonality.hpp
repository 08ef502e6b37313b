#pragma once
// The difference operators D and D_R, the bases phi, f, g, the R-kernel, the
// generalized eigenvalue problems and the modular basis h.

#include "integrals.hpp"

namespace ellhyp {

// ---- difference operators ---------------------------------------------------

// scale * [theta(az,bz,cz,dz;P)/(z theta(z^2;P)) f(hz) + theta(a/z,..;P)/(z^-1 theta(z^-2;P)) f(z/h)]
// h = Q^{1/2} is carried explicitly.
struct DOp {
  cplx a, b, c, d;
  cplx P;
  cplx h;
  cplx scale = 1.0;

  DOp(cplx a_, cplx b_, cplx c_, cplx d_, cplx P_, cplx h_, cplx scale_ = 1.0)
      : a(a_), b(b_), c(c_), d(d_), P(P_), h(h_), scale(scale_) {
    Nome chk(P);
    (void)chk;
    if (h == 0.0 || !finite(h)) throw invalid_argument("DOp: bad shift");
  }
  // D(a,b,c,d;p;q)
  static DOp standard(cplx a, cplx b, cplx c, cplx d, const BasePair& bs) {
    return DOp(a, b, c, d, bs.p, std::sqrt(bs.q));
  }
  // D(a,b,c,d;q;p): theta base q, shift p^{1/2}
  static DOp permuted(cplx a, cplx b, cplx c, cplx d, const BasePair& bs) {
    return DOp(a, b, c, d, bs.q, std::sqrt(bs.p));
  }
  cplx rho() const { return a * b * c * d; }

  // (cd/h) D(P h/a, P h/b, h/c, h/d)
  DOp star() const {
    return DOp(P * h / a, P * h / b, h / c, h / d, P, h, scale * c * d / h);
  }
};

inline std::array<cplx, 2> d_coefficients(const DOp& D, cplx z) {
  Nome n(D.P);
  cplx s2 = theta(z * z, n), s2i = theta(1.0 / (z * z), n);
  if (!(std::abs(s2) > degenerate_tol) || !(std::abs(s2i) > degenerate_tol))
    throw pole_error("d_operator: theta(z^2) vanishes at z = " + to_string(z));
  cplx up = thetas(n, D.a * z, D.b * z, D.c * z, D.d * z) / (z * s2);
  cplx dn = thetas(n, D.a / z, D.b / z, D.c / z, D.d / z) * z / s2i;
  return {D.scale * up, D.scale * dn};
}

inline cplx d_apply(const DOp& D, const Fn& f, cplx z) {
  auto C = d_coefficients(D, z);
  return C[0] * f(D.h * z) + C[1] * f(z / D.h);
}

// (D f)(z) / Gamma(z^{+-2}) with theta(z^2;p) cancelled against the weight, so
// the nodes z = +-1 stay finite. Needs theta base p.
inline cplx d_apply_weighted(const DOp& D, const Fn& f, cplx z, const BasePair& bs) {
  if (D.P != bs.p) return d_apply(D, f, z) * gamma_weight(z, bs);
  Nome n(D.P);
  cplx tq = theta(1.0 / (z * z), bs.nome_q());
  cplx up = thetas(n, D.a * z, D.b * z, D.c * z, D.d * z) / z * tq;
  cplx dn = -thetas(n, D.a / z, D.b / z, D.c / z, D.d / z) * z * z * z * tq;
  return D.scale * (up * f(D.h * z) + dn * f(z / D.h));
}

// D_R(a,b,c,d;p;q), coefficients without the 1/z, z factors
struct DROp {
  cplx a, b, c, d;
  cplx P, h;
  static DROp standard(cplx a, cplx b, cplx c, cplx d, const BasePair& bs) {
    return {a, b, c, d, bs.p, std::sqrt(bs.q)};
  }
  // D_R(P h/a, P h/b, P h/c, P h/d)
  DROp star() const { return {P * h / a, P * h / b, P * h / c, P * h / d, P, h}; }
};

inline cplx dr_apply(const DROp& D, const Fn& f, cplx z) {
  Nome n(D.P);
  cplx s2 = theta(z * z, n), s2i = theta(1.0 / (z * z), n);
  if (!(std::abs(s2) > degenerate_tol) || !(std::abs(s2i) > degenerate_tol))
    throw pole_error("d_operator: theta(z^2) vanishes at z = " + to_string(z));
  return thetas(n, D.a * z, D.b * z, D.c * z, D.d * z) / s2 * f(D.h * z) +
         thetas(n, D.a / z, D.b / z, D.c / z, D.d / z) / s2i * f(z / D.h);
}

// <chi, psi> = kappa int chi psi / Gamma(z^{+-2}) dz/z
inline QuadratureResult inner_product(const Fn& chi, const Fn& psi, const BasePair& b, const QuadratureSpec& spec = {}) {
  auto r = circle_mean([&](cplx z) { return chi(z) * psi(z) * gamma_weight(z, b); }, spec);
  r.value *= kappa_mean_factor(b);
  return r;
}

// ---- bases ------------------------------------------------------------------

// Gamma(saxi^+-, sbxi^+-, k w^+- xi^+-) with k = sqrt(pq/ab) explicit
inline cplx phi_vector(cplx w, cplx a, cplx b, cplx xi, cplx s, cplx k, const BasePair& bs) {
  return gamma_pm(s * a, xi, bs) * gamma_pm(s * b, xi, bs) * gamma_pm(k * w, xi, bs) * gamma_pm(k / w, xi, bs);
}

inline cplx phi_vector(cplx w, cplx a, cplx b, cplx xi, cplx s, const BasePair& bs) {
  return phi_vector(w, a, b, xi, s, std::sqrt(bs.pq() / (a * b)), bs);
}

// f(z;w;a,b;rho) with r = sqrt(ab/rho) explicit
inline cplx f_basis_root(cplx z, cplx w, cplx a, cplx b, cplx r, const BasePair& bs) {
  const cplx pq = bs.pq();
  return gamma_pm(pq / a, z, bs) * gamma_pm(pq / b, z, bs) * gamma_pm(r * w, z, bs) * gamma_pm(r / w, z, bs);
}

inline cplx f_basis(cplx z, cplx w, cplx a, cplx b, cplx rho, const BasePair& bs) {
  return f_basis_root(z, w, a, b, std::sqrt(a * b / rho), bs);
}

// g(z;v;a,b;rho) with r = sqrt(rho/ab) explicit
inline cplx g_dual_root(cplx z, cplx v, cplx a, cplx b, cplx r, const BasePair& bs) {
  return gamma_pm(a, z, bs) * gamma_pm(b, z, bs) * gamma_pm(r * v, z, bs) * gamma_pm(r / v, z, bs);
}

inline cplx g_dual(cplx z, cplx v, cplx a, cplx b, cplx rho, const BasePair& bs) {
  return g_dual_root(z, v, a, b, std::sqrt(rho / (a * b)), bs);
}

// lambda(w) for the pair (c,d), (c',d'); square roots of c/d passed explicitly
inline cplx spectral_lambda(cplx w, cplx sqrt_cd_ratio, cplx sqrt_cpdp_ratio, const Nome& n) {
  cplx den = thetas(n, w * sqrt_cpdp_ratio, w / sqrt_cpdp_ratio);
  if (!(std::abs(den) > degenerate_tol)) throw degenerate_error("spectral_lambda: vanishing denominator");
  return thetas(n, w * sqrt_cd_ratio, w / sqrt_cd_ratio) / den;
}

// Square roots of c and d, fixed once per configuration.
struct RootPair {
  cplx sc, sd;
  static RootPair of(cplx c, cplx d) { return {std::sqrt(c), std::sqrt(d)}; }
  cplx c() const { return sc * sc; }
  cplx d() const { return sd * sd; }
  cplx sqrt_cd() const { return sc * sd; }
  cplx sqrt_d_over_c() const { return sd / sc; }
};

// f(q^{1/2}z;w;q^{1/2}a,q^{1/2}b)/f(q^{-1/2}z;..) = z^4 theta(a/z,b/z,w^+- sqrt(cd)/z)/theta(az,bz,w^+- sqrt(cd) z)
inline double f_eq_residual(cplx z, cplx w, cplx a, cplx b, cplx sqrt_cd, const BasePair& bs) {
  const cplx h = std::sqrt(bs.q);
  auto n = bs.nome_p();
  cplx r = h / sqrt_cd;
  cplx num = f_basis_root(h * z, w, h * a, h * b, r, bs);
  cplx den = f_basis_root(z / h, w, h * a, h * b, r, bs);
  cplx rhs = std::pow(z, 4) * thetas(n, a / z, b / z, w * sqrt_cd / z, sqrt_cd / (w * z)) /
             thetas(n, a * z, b * z, w * sqrt_cd * z, sqrt_cd * z / w);
  return rel_diff(num, den * rhs);
}

// D(a,b,c,d) f(z;w;q^{1/2}a,q^{1/2}b;rho) = d^{-1} theta(w^+- sqrt(d/c), cd;p) f(z;w;a,b;rho)
inline double gevp2_residual(cplx z, cplx w, cplx a, cplx b, const RootPair& cd, const BasePair& bs) {
  const cplx h = std::sqrt(bs.q);
  auto n = bs.nome_p();
  DOp D = DOp::standard(a, b, cd.c(), cd.d(), bs);
  cplx r0 = 1.0 / cd.sqrt_cd();  // sqrt(ab/rho)
  cplx lhs = d_apply(D, [&](cplx y) { return f_basis_root(y, w, h * a, h * b, h * r0, bs); }, z);
  cplx q = cd.sqrt_d_over_c();
  cplx rhs = thetas(n, w * q, q / w, cd.c() * cd.d()) / cd.d() * f_basis_root(z, w, a, b, r0, bs);
  return rel_diff(lhs, rhs);
}

// D(a,b,c,d) f = lambda(w) D(a,b,c',d') f for f = f(z;w;h a,h b;rho), h = Q^{1/2};
// permuted = true swaps the roles of p and q.
inline double gevp_residual(cplx z, cplx w, cplx a, cplx b, const RootPair& cd, const RootPair& cdp,
                            const BasePair& bs, bool permuted = false) {
  if (!(std::abs(cd.sqrt_cd() / cdp.sqrt_cd() - 1.0) <= balancing_tol))
    throw invalid_argument("gevp: need cd = c'd' with matching square roots");
  if (std::abs(cd.c() / cdp.c() - 1.0) < 1e-14 && std::abs(cd.d() / cdp.d() - 1.0) < 1e-14)
    throw degenerate_error("gevp: (c',d') = (c,d) makes the relation 0 = 0");
  const BasePair B = permuted ? bs.swapped() : bs;
  const cplx h = std::sqrt(B.q);
  cplx r = h / cd.sqrt_cd();
  Fn f = [&](cplx y) { return f_basis_root(y, w, h * a, h * b, r, bs); };
  DOp D1(a, b, cd.c(), cd.d(), B.p, h), D2(a, b, cdp.c(), cdp.d(), B.p, h);
  cplx lam = spectral_lambda(w, cd.sqrt_d_over_c(), cdp.sqrt_d_over_c(), B.nome_p());
  return rel_diff(d_apply(D1, f, z), lam * d_apply(D2, f, z));
}

// ratio of the two gevp2 eigen-scalars against lambda(w)
inline double lambda_ratio_residual(cplx w, const RootPair& cd, const RootPair& cdp, const BasePair& bs) {
  auto n = bs.nome_p();
  auto eig = [&](const RootPair& r) {
    cplx q = r.sqrt_d_over_c();
    return thetas(n, w * q, q / w, r.c() * r.d()) / r.d();
  };
  return rel_diff(eig(cd) / eig(cdp), spectral_lambda(w, cd.sqrt_d_over_c(), cdp.sqrt_d_over_c(), n));
}

// D(a,b,c',d') D(ha,hb,c/h,d/h) = D(a,b,c,d) D(ha,hb,c'/h,d'/h) on a test function
inline double ccr_residual(cplx a, cplx b, cplx c, cplx d, cplx cp, cplx dp, const Fn& f, cplx z, const BasePair& bs) {
  if (!(std::abs(c * d / (cp * dp) - 1.0) <= balancing_tol)) throw invalid_argument("ccr: need cd = c'd'");
  const cplx h = std::sqrt(bs.q);
  auto comp = [&](cplx c1, cplx d1, cplx c2, cplx d2) {
    DOp outer = DOp::standard(a, b, c1, d1, bs), inner = DOp::standard(h * a, h * b, c2 / h, d2 / h, bs);
    return d_apply(outer, [&](cplx y) { return d_apply(inner, f, y); }, z);
  };
  return rel_diff(comp(cp, dp, c, d), comp(c, d, cp, dp));
}

// f(z; q^k sqrt(a/(b q^N)); a,b; q^-N) against prod_{j<k} theta(q^j a z^+-) prod_{j<N-k} theta(q^j b z^+-)
inline double dis_bas_residual(cplx z, cplx a, cplx b, int N, int k, const BasePair& bs) {
  if (N < 0 || k < 0 || k > N) throw invalid_argument("dis_bas: need 0 <= k <= N");
  auto n = bs.nome_p();
  cplx qN = std::pow(bs.q, N);
  cplx r1 = std::sqrt(a / (b * qN));
  cplx w = std::pow(bs.q, k) * r1;
  cplx lhs = f_basis_root(z, w, a, b, a / r1, bs);
  cplx rhs = 1.0;
  for (int j = 0; j < k; ++j) rhs *= theta_pm(std::pow(bs.q, j) * a, z, n);
  for (int j = 0; j < N - k; ++j) rhs *= theta_pm(std::pow(bs.q, j) * b, z, n);
  return rel_diff(lhs, rhs);
}

// ---- the theta identity behind gen-act --------------------------------------

// z^{-n-1} prod theta(a_i z) prod theta(b_k z) - (z -> 1/z)
//   = (-1)^n z theta(z^-2) / prod a * sum_j prod_k theta(a_j b_k) prod_{l!=j} theta(a_l z^+-)/theta(a_j/a_l)
inline double theta_lemma_residual(const std::vector<cplx>& A, const std::vector<cplx>& B, cplx z, const Nome& nm) {
  const std::size_t n = A.size();
  if (n == 0 || B.size() != n + 2) throw invalid_argument("theta_lemma: need n a's and n+2 b's");
  cplx pr = product(A) * product(B);
  if (!(std::abs(pr - 1.0) <= balancing_tol)) throw invalid_argument("theta_lemma: need prod a prod b = 1");
  auto L = [&](cplx y) {
    cplx r = std::pow(y, -static_cast<int>(n) - 1);
    for (auto x : A) r *= theta(x * y, nm);
    for (auto x : B) r *= theta(x * y, nm);
    return r;
  };
  cplx lhs = L(z) - L(1.0 / z);
  cplx S = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    cplx t = 1.0;
    for (auto bk : B) t *= theta(A[j] * bk, nm);
    for (std::size_t l = 0; l < n; ++l)
      if (l != j) t *= theta_pm(A[l], z, nm) / theta(A[j] / A[l], nm);
    S += t;
  }
  cplx rhs = (n % 2 ? -1.0 : 1.0) * z * theta(1.0 / (z * z), nm) / product(A) * S;
  return rel_diff(lhs, rhs);
}

// D(a,b,c,d;p;q) f(z;w;h e,h h2;rho), rho = abcd, expanded over f(z;w/h;qe,h2),
// f(z;1/(wh);qe,h2) and f(z;w;qe,qh2).
struct GenAct {
  cplx lhs, expansion;
};

inline GenAct gen_act_terms(cplx a, cplx b, cplx c, cplx d, cplx e, cplx h2, cplx z, cplx w, const BasePair& bs) {
  const cplx h = std::sqrt(bs.q), q = bs.q;
  auto n = bs.nome_p();
  cplx rho = a * b * c * d;
  cplx s = std::sqrt(e * h2 / rho);
  DOp D = DOp::standard(a, b, c, d, bs);
  cplx lhs = d_apply(D, [&](cplx y) { return f_basis_root(y, w, h * e, h * h2, h * s, bs); }, z);
  auto term = [&](cplx wv) {
    cplx den = h2 * h2 * thetas(n, h2 * s * wv, wv * wv);
    require_nonzero(den, "gen_act");
    return thetas(n, s * a * wv, s * b * wv, s * c * wv, s * d * wv, s / e * wv) / den *
           f_basis_root(z, wv / h, q * e, h2, h * s, bs);
  };
  cplx d3 = thetas(n, w / (h2 * s), 1.0 / (h2 * s * w));
  require_nonzero(d3, "gen_act");
  cplx t3 = thetas(n, a / h2, b / h2, c / h2, d / h2, 1.0 / (h2 * e)) / d3 * f_basis_root(z, w, q * e, q * h2, q * s, bs);
  return {lhs, rho * h2 * (term(w) + term(1.0 / w) + t3)};
}

inline double gen_act_residual(cplx a, cplx b, cplx c, cplx d, cplx e, cplx h2, cplx z, cplx w, const BasePair& bs) {
  auto g = gen_act_terms(a, b, c, d, e, h2, z, w, bs);
  return rel_diff(g.lhs, g.expansion);
}

// ---- R-kernel ---------------------------------------------------------------

// R(a,b,c,d;x,w) in the standard form
inline QuadratureResult r_kernel(cplx a, cplx b, cplx c, cplx d, cplx x, cplx w, cplx rho, const BasePair& bs,
                                 const QuadratureSpec& spec = {}) {
  const cplx pq = bs.pq();
  cplx k = std::sqrt(rho / (a * b)), l = std::sqrt(c * d / rho);
  cplx pre = gamma_pq(c * d, bs) * gamma_pm(std::sqrt(c * rho / d), w, bs) * gamma_pm(std::sqrt(d * rho / c), w, bs);
  pre /= gamma_pq(a * b, bs) * gamma_pm(std::sqrt(a * rho / b), x, bs) * gamma_pm(std::sqrt(b * rho / a), x, bs);
  pre /= gamma_pq(c * d / rho, bs) * gamma_pq(rho / (a * b), bs);
  pre *= gamma_weight(w, bs);
  auto v = v_quad({a, b, k * x, k / x, pq / c, pq / d, l * w, l / w}, bs, spec);
  v.value *= pre;
  return v;
}

// the same kernel after the first E7 transformation
inline QuadratureResult r_kernel_e7(cplx a, cplx b, cplx c, cplx d, cplx x, cplx w, cplx rho, const BasePair& bs,
                                    const QuadratureSpec& spec = {}) {
  const cplx pq = bs.pq();
  cplx s = std::sqrt(pq / rho), k = std::sqrt(pq / (a * b)), l = std::sqrt(c * d / pq);
  auto v = v_quad({s * a, s * b, k * x, k / x, pq / (c * s), pq / (d * s), l * w, l / w}, bs, spec);
  v.value *= gamma_weight(w, bs) / (gamma_pq(pq / (c * d), bs) * gamma_pq(c * d / pq, bs));
  return v;
}

inline Residual r_forms_residual(cplx a, cplx b, cplx c, cplx d, cplx x, cplx w, cplx rho, const BasePair& bs,
                                 const QuadratureSpec& spec = {}) {
  auto r1 = r_kernel(a, b, c, d, x, w, rho, bs, spec);
  auto r2 = r_kernel_e7(a, b, c, d, x, w, rho, bs, spec);
  Residual r(rel_diff(r1.value, r2.value));
  r.merge(r1).merge(r2);
  return r;
}

// phi(x;c,d|xi;s) = kappa int R(c,d,a,b;x,w) phi(w;a,b|xi;s) dw/w, s = sqrt(pq/rho)
inline Residual key_relation_residual(cplx c, cplx d, cplx a, cplx b, cplx x, cplx xi, cplx rho, const BasePair& bs,
                                      const QuadratureSpec& outer, const QuadratureSpec& inner) {
  cplx s = std::sqrt(bs.pq() / rho);
  cplx lhs = phi_vector(x, c, d, xi, s, bs);
  int inner_nodes = 0;
  bool inner_ok = true;
  auto q = circle_mean(
      [&](cplx w) {
        auto R = r_kernel(c, d, a, b, x, w, rho, bs, inner);
        if (!R.converged) inner_ok = false;
        inner_nodes = std::max(inner_nodes, R.nodes_used);
        return R.value * phi_vector(w, a, b, xi, s, bs);
      },
      outer);
  cplx rhs = kappa_mean_factor(bs) * q.value;
  Residual r(rel_diff(lhs, rhs), q.nodes_used, q.converged && inner_ok);
  return r;
}

// kappa int R(a,b,c,d;x,w) R(c,d,e,f;w,z) dw/w = R(a,b,e,f;x,z); the second
// kernel is evaluated in its E7 form
inline Residual reproducing_residual(cplx a, cplx b, cplx c, cplx d, cplx e, cplx f, cplx x, cplx z, cplx rho,
                                     const BasePair& bs, const QuadratureSpec& outer, const QuadratureSpec& inner) {
  bool inner_ok = true;
  auto q = circle_mean(
      [&](cplx w) {
        auto R1 = r_kernel(a, b, c, d, x, w, rho, bs, inner);
        auto R2 = r_kernel_e7(c, d, e, f, w, z, rho, bs, inner);
        if (!R1.converged || !R2.converged) inner_ok = false;
        return R1.value * R2.value;
      },
      outer);
  auto rhs = r_kernel(a, b, e, f, x, z, rho, bs, inner);
  cplx lhs = kappa_mean_factor(bs) * q.value;
  return Residual(rel_diff(lhs, rhs.value), q.nodes_used, q.converged && inner_ok && rhs.converged);
}

// V at parameters that may lie outside the unit-circle domain, continued
// through whichever E7 image is admissible.
inline QuadratureResult v_continued(const Params8& t, const BasePair& b, const QuadratureSpec& spec) {
  bool ok = true;
  for (auto x : t) ok = ok && std::abs(x) <= 1.0 - spec.margin;
  if (ok) return v_quad(t, b, spec);
  for (auto kind : {E7Kind::first, E7Kind::second, E7Kind::third}) {
    try {
      auto img = e7_transform(t, kind, b, spec.margin);
      auto r = v_quad(img.t, b, spec);
      r.value *= img.prefactor;
      return r;
    } catch (const inadmissible_error&) {
    }
  }
  throw inadmissible_error("v_continued: no admissible E7 image");
}

// r(alpha,beta,gamma,delta;z,x;t,w) of the compact key relation
inline QuadratureResult compact_r(cplx al, cplx be, cplx ga, cplx de, cplx z, cplx x, cplx t, cplx w,
                                  const BasePair& bs, const QuadratureSpec& spec) {
  if (!(std::abs(al * be / (ga * de) - 1.0) <= balancing_tol))
    throw invalid_argument("compact_r: need alpha beta = gamma delta");
  const cplx pq = bs.pq();
  auto v = v_continued({be * x, be / x, al * z, al / z, pq / ga * t, pq / (ga * t), w / de, 1.0 / (w * de)}, bs, spec);
  v.value *= gamma_weight(w, bs) / (gamma_pq(de * de, bs) * gamma_pq(1.0 / (de * de), bs));
  return v;
}

// Gamma(alpha z^+- xi^+-, beta x^+- xi^+-) = kappa int r Gamma(gamma t^+- xi^+-, delta w^+- xi^+-) dw/w
inline Residual compact_key_relation_residual(cplx al, cplx be, cplx ga, cplx de, cplx z, cplx x, cplx t, cplx xi,
                                              const BasePair& bs, const QuadratureSpec& outer,
                                              const QuadratureSpec& inner) {
  auto g4 = [&](cplx m, cplx y) { return gamma_pm(m * y, xi, bs) * gamma_pm(m / y, xi, bs); };
  cplx lhs = g4(al, z) * g4(be, x);
  bool inner_ok = true;
  auto q = circle_mean(
      [&](cplx w) {
        auto r = compact_r(al, be, ga, de, z, x, t, w, bs, inner);
        if (!r.converged) inner_ok = false;
        return r.value * g4(ga, t) * g4(de, w);
      },
      outer);
  cplx rhs = kappa_mean_factor(bs) * q.value;
  return Residual(rel_diff(lhs, rhs), q.nodes_used, q.converged && inner_ok);
}

// kappa int g(z;v;a,b;e) f(z;w;c,d;e) / Gamma(z^{+-2}) = V(a,b,sqrt(e/ab)v^+-,pq/c,pq/d,sqrt(cd/e)w^+-)
inline Residual overlap_v_residual(cplx a, cplx b, cplx c, cplx d, cplx e, cplx v, cplx w, const BasePair& bs,
                                   const QuadratureSpec& spec = {}) {
  cplx rg = std::sqrt(e / (a * b)), rf = std::sqrt(c * d / e);
  std::array<cplx, 8> t{a, b, rg * v, rg / v, bs.pq() / c, bs.pq() / d, rf * w, rf / w};
  require_admissible(t, spec.margin, "overlap_v");
  auto L = inner_product([&](cplx z) { return g_dual_root(z, v, a, b, rg, bs); },
                         [&](cplx z) { return f_basis_root(z, w, c, d, rf, bs); }, bs, spec);
  auto R = v_quad(t, bs, spec);
  Residual r(rel_diff(L.value, R.value));
  r.merge(L).merge(R);
  return r;
}

// kappa int phi(z;pq/e,pq/f|xi;1/s) phi(x;c,d|xi;s) / Gamma(xi^{+-2}) = V(s t_1..4, t_5..8 / s)
inline Residual prel_residual(cplx c, cplx d, cplx e, cplx f, cplx x, cplx z, cplx s, const BasePair& bs,
                              const QuadratureSpec& spec = {}) {
  const cplx pq = bs.pq();
  cplx kx = std::sqrt(pq / (c * d)), kz = std::sqrt(e * f / pq);
  std::array<cplx, 8> t{c, d, x * kx / s, kx / (x * s), pq / e, pq / f, z * s * kz, s * kz / z};
  Params8 u{s * t[0], s * t[1], s * t[2], s * t[3], t[4] / s, t[5] / s, t[6] / s, t[7] / s};
  require_admissible(u, spec.margin, "prel");
  auto L = inner_product([&](cplx y) { return phi_vector(z, pq / e, pq / f, y, 1.0 / s, kz, bs); },
                         [&](cplx y) { return phi_vector(x, c, d, y, s, kx, bs); }, bs, spec);
  auto R = v_quad(u, bs, spec);
  Residual r(rel_diff(L.value, R.value));
  r.merge(L).merge(R);
  return r;
}

// <D* g, f> = <g, D f> with g = g(z;v;a,b;rho_g), f = f(z;w;q^{1/2}a,q^{1/2}b;rho_f)
inline Residual gevp_dual_residual(cplx a, cplx b, cplx c, cplx d, cplx rho_g, cplx rho_f, cplx v, cplx w,
                                   const BasePair& bs, const QuadratureSpec& spec = {}) {
  const cplx h = std::sqrt(bs.q);
  cplx rg = std::sqrt(rho_g / (a * b)), rf = h * std::sqrt(a * b / rho_f);
  double aq = std::abs(h);
  for (cplx m : {rg * v, rg / v})
    if (!(std::abs(m) <= aq * (1.0 - spec.margin)))
      throw inadmissible_error("gevp_dual: g must be analytic on |q|^{1/2} <= |z| <= |q|^{-1/2}");
  for (cplx m : {rf * w, rf / w, bs.p * h / a, bs.p * h / b})
    if (!(std::abs(m) <= aq * (1.0 - spec.margin)))
      throw inadmissible_error("gevp_dual: f must be analytic on |q|^{1/2} <= |z| <= |q|^{-1/2}");
  for (cplx m : {a, b})
    if (!(std::abs(m) <= aq * (1.0 - spec.margin)))
      throw inadmissible_error("gevp_dual: need |a|, |b| < |q|^{1/2}");
  Fn g = [&](cplx z) { return g_dual_root(z, v, a, b, rg, bs); };
  Fn f = [&](cplx z) { return f_basis_root(z, w, h * a, h * b, rf, bs); };
  DOp D = DOp::standard(a, b, c, d, bs), Ds = D.star();
  auto L = circle_mean([&](cplx z) { return d_apply_weighted(Ds, g, z, bs) * f(z); }, spec);
  auto R = circle_mean([&](cplx z) { return g(z) * d_apply_weighted(D, f, z, bs); }, spec);
  Residual r(rel_diff(L.value, R.value));
  r.merge(L).merge(R);
  return r;
}

// ---- modular basis ----------------------------------------------------------

// G(A +- v +- u) / G(alpha +- u, beta +- u), A = (alpha + beta - sigma)/2
inline cplx h_modular(cplx u, cplx v, cplx al, cplx be, cplx si, const OmegaTriple& om) {
  cplx A = (al + be - si) / 2.0;
  cplx num = 1.0;
  for (int s1 : {1, -1})
    for (int s2 : {1, -1}) num *= modified_gamma_g(A + double(s1) * v + double(s2) * u, om);
  cplx den = modified_gamma_g(al + u, om) * modified_gamma_g(al - u, om) * modified_gamma_g(be + u, om) *
             modified_gamma_g(be - u, om);
  return num / den;
}

// h(u+w1/2; v; alpha+w1/2, beta+w1/2) / h(u-w1/2; ..) against the multiplicative
// theta right side, sigma = alpha+beta+gamma+delta
inline double f_eq_add_residual(cplx u, cplx v, cplx al, cplx be, cplx ga, cplx de, const OmegaTriple& om) {
  require_gamma_regime(om);
  cplx si = al + be + ga + de;
  cplx hw = om.w1 / 2.0;
  cplx lhs = h_modular(u + hw, v, al + hw, be + hw, si, om) / h_modular(u - hw, v, al + hw, be + hw, si, om);
  auto E = [&](cplx x) { return std::exp(2.0 * pi * I * x / om.w2); };
  Nome n(om.p());
  cplx z = E(u), a = E(al), b = E(be), w = E(v);
  cplx scd = std::exp(pi * I * (ga + de) / om.w2);
  cplx rhs = std::pow(z, 4) * thetas(n, a / z, b / z, w * scd / z, scd / (w * z)) /
             thetas(n, a * z, b * z, w * z * scd, z * scd / w);
  return rel_diff(lhs, rhs);
}

}  // namespace ellhyp
