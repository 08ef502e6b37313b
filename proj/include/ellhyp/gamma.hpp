#pragma once
// Elliptic gamma function Gamma_{p,q} and the modified elliptic gamma G(u;omega).

#include "theta.hpp"

namespace ellhyp {

struct BasePair {
  cplx p, q;
  double eps = 1e-17;

  BasePair(cplx p_, cplx q_, double eps_ = 1e-17) : p(p_), q(q_), eps(eps_) {
    if (!finite(p) || !finite(q)) throw invalid_argument("BasePair: non-finite base");
    if (!(std::abs(p) < 1.0 && std::abs(q) < 1.0))
      throw invalid_argument("BasePair: need |p| < 1 and |q| < 1");
    if (!(eps > 0.0 && eps <= 1e-8)) throw invalid_argument("BasePair: eps outside (0, 1e-8]");
  }
  Nome nome_p() const { return Nome(p, eps); }
  Nome nome_q() const { return Nome(q, eps); }
  BasePair swapped() const { return BasePair(q, p, eps); }
  cplx pq() const { return p * q; }
};

inline constexpr double pole_threshold = 1e-8;

// Double product over j,k >= 0 of (1 - p^{j+1} q^{k+1}/z) / (1 - z p^j q^k).
// Rows are accumulated separately and folded into a scaled mantissa so long
// products never overflow.
inline cplx gamma_pq(cplx z, const BasePair& b) {
  require_finite(z, "gamma_pq");
  if (z == 0.0) throw invalid_argument("gamma_pq: z = 0");
  const double ap = std::abs(b.p), aq = std::abs(b.q);
  const double rq = 1.0 / (1.0 - aq), rpq = rq / (1.0 - ap);
  const double pole2 = pole_threshold * pole_threshold;
  const cplx zi = 1.0 / z, pq = b.p * b.q;
  cplx mant = 1.0;
  int ex = 0;
  cplx a0 = z, c0 = pq * zi;  // z p^j, p^{j+1} q / z
  // moduli tracked as reals; |a0| and |c0| shrink by |p| per row, |q| per column
  double ma0 = std::abs(a0), mc0 = std::abs(c0);
  for (int j = 0; j < 4096; ++j) {
    if ((ma0 + mc0) * rpq < b.eps) break;
    cplx a = a0, c = c0, num = 1.0, den = 1.0;
    double ma = ma0, mc = mc0;
    for (int k = 0; k < 100000; ++k) {
      if ((ma + mc) * rq < b.eps) break;
      cplx d = 1.0 - a;
      // |a| near 1 is the only place a pole can sit
      if (ma > 0.5 && std::norm(d) < pole2)
        throw pole_error("gamma_pq: argument " + to_string(z) + " on the pole lattice");
      num *= 1.0 - c;
      den *= d;
      a *= b.q;
      c *= b.q;
      ma *= aq;
      mc *= aq;
      if (ma == 0.0 && mc == 0.0) break;
    }
    mant *= num / den;
    int e = 0;
    std::frexp(std::abs(mant), &e);
    if (e > 200 || e < -200) {
      mant = cplx(std::ldexp(mant.real(), -e), std::ldexp(mant.imag(), -e));
      ex += e;
    }
    a0 *= b.p;
    c0 *= b.p;
    ma0 *= ap;
    mc0 *= ap;
    if (ma0 == 0.0 && mc0 == 0.0) break;
  }
  return cplx(std::ldexp(mant.real(), ex), std::ldexp(mant.imag(), ex));
}

// Gamma(t z) Gamma(t / z)
inline cplx gamma_pm(cplx t, cplx z, const BasePair& b) {
  if (z == 0.0) throw invalid_argument("gamma_pm: z = 0");
  return gamma_pq(t * z, b) * gamma_pq(t / z, b);
}

inline cplx gamma_prod(const BasePair& b, std::initializer_list<cplx> zs) {
  cplx r = 1.0;
  for (auto z : zs) r *= gamma_pq(z, b);
  return r;
}

// 1 / Gamma(z^{+-2}) = theta(z^2;p) theta(z^{-2};q); finite (zero) at z = +-1.
inline cplx gamma_weight(cplx z, const BasePair& b) {
  return theta(z * z, b.nome_p()) * theta(1.0 / (z * z), b.nome_q());
}

// ---- modified elliptic gamma -----------------------------------------------

struct OmegaTriple {
  cplx w1, w2, w3;

  OmegaTriple(cplx a, cplx b, cplx c) : w1(a), w2(b), w3(c) {
    if (!finite(a) || !finite(b) || !finite(c)) throw invalid_argument("OmegaTriple: non-finite");
    if (a == 0.0 || b == 0.0 || c == 0.0) throw invalid_argument("OmegaTriple: zero period");
  }
  static cplx e(cplx x) { return std::exp(2.0 * pi * I * x); }
  cplx q() const { return e(w1 / w2); }
  cplx p() const { return e(w3 / w2); }
  cplx r() const { return e(w3 / w1); }
  cplx q_tilde() const { return e(-w2 / w1); }
  cplx p_tilde() const { return e(-w2 / w3); }
  cplx r_tilde() const { return e(-w1 / w3); }
  cplx sum() const { return w1 + w2 + w3; }
  OmegaTriple swap12() const { return OmegaTriple(w2, w1, w3); }
};

inline cplx bernoulli_b22(cplx u, cplx w1, cplx w2) {
  if (w1 == 0.0 || w2 == 0.0) throw invalid_argument("bernoulli_b22: zero period");
  return u * u / (w1 * w2) - u / w1 - u / w2 + w1 / (6.0 * w2) + w2 / (6.0 * w1) + 0.5;
}

inline cplx cubic_p(cplx u, const OmegaTriple& w) {
  cplx v = u - w.sum() / 2.0;
  cplx s2 = w.w1 * w.w1 + w.w2 * w.w2 + w.w3 * w.w3;
  return v * (v * v - s2 / 4.0) / (3.0 * w.w1 * w.w2 * w.w3);
}

inline void require_gamma_regime(const OmegaTriple& w) {
  if (!(std::abs(w.p()) < 1.0) || !(std::abs(w.r()) < 1.0))
    throw regime_error("modified_gamma: need |p| < 1 and |r| < 1");
}

// Gamma(e^{2 pi i u/w2}; p, q) Gamma(r e^{-2 pi i u/w1}; q~, r); needs |q| < 1.
inline cplx modified_gamma_rep1(cplx u, const OmegaTriple& w) {
  require_gamma_regime(w);
  cplx q = w.q();
  if (!(std::abs(q) < 1.0)) throw regime_error("modified_gamma_rep1: need |q| < 1");
  BasePair b1(w.p(), q), b2(w.q_tilde(), w.r());
  return gamma_pq(std::exp(2.0 * pi * I * u / w.w2), b1) *
         gamma_pq(w.r() * std::exp(-2.0 * pi * I * u / w.w1), b2);
}

// e^{-pi i P(u)} Gamma(e^{-2 pi i u/w3}; r~, p~); defined whenever |p|, |r| < 1.
inline cplx modified_gamma_rep2(cplx u, const OmegaTriple& w) {
  require_gamma_regime(w);
  BasePair b(w.r_tilde(), w.p_tilde());
  return std::exp(-pi * I * cubic_p(u, w)) * gamma_pq(std::exp(-2.0 * pi * I * u / w.w3), b);
}

// |q| = 1 uses the second representation; |q| > 1 evaluates the first one
// with w1 <-> w2 exchanged (G is symmetric in w1, w2).
inline cplx modified_gamma_g(cplx u, const OmegaTriple& w) {
  require_finite(u, "modified_gamma_g");
  require_gamma_regime(w);
  double aq = std::abs(w.q());
  if (std::abs(aq - 1.0) < 1e-12) return modified_gamma_rep2(u, w);
  if (aq < 1.0) return modified_gamma_rep1(u, w);
  return modified_gamma_rep1(u, w.swap12());
}

}  // namespace ellhyp
