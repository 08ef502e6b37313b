#pragma once
// Difference Heun operator: Bethe ansatz eigenfunctions, the eta -> 0 Heun
// limit, the one particle van Diejen Hamiltonian and its zero modes.

#include "sklyanin.hpp"

namespace ellhyp {

// ---- Bethe ansatz -------------------------------------------------------------

struct BetheConfig {
  int N = 0;
  Quad a{};
  std::vector<cplx> roots;
  cplx eta, tau;

  BetheConfig(int N_, const Quad& a_, std::vector<cplx> roots_, cplx eta_, cplx tau_)
      : N(N_), a(a_), roots(std::move(roots_)), eta(eta_), tau(tau_) {
    require_tau(tau);
    if (N < 0) throw invalid_argument("BetheConfig: N must be >= 0");
    if (static_cast<int>(roots.size()) != N) throw invalid_argument("BetheConfig: need exactly N roots");
    require_delta_sum(a, -2.0 * double(N) * eta, "BetheConfig");
  }
  // a4 fixed by the sum rule
  static Quad complete(cplx a1, cplx a2, cplx a3, int N, cplx eta) {
    return {a1, a2, a3, -2.0 * double(N) * eta - a1 - a2 - a3};
  }
  cplx th1(cplx u) const { return theta1(u, tau); }
};

// prod_m theta1(u + u_m) theta1(u - u_m)
inline cplx bethe_psi(cplx u, const BetheConfig& c) {
  cplx r = 1.0;
  for (auto um : c.roots) r *= c.th1(u + um) * c.th1(u - um);
  return r;
}

namespace detail {

// Both sides of the m-th Bethe equation, multiplied out.
inline std::array<cplx, 2> bethe_sides(int m, const Quad& a, const std::vector<cplx>& u, cplx eta, cplx tau) {
  cplx um = u[m], L = 1.0, R = 1.0;
  for (auto ak : a) {
    L *= theta1(ak + um, tau);
    R *= theta1(ak - um, tau);
  }
  for (auto un : u) {
    L *= theta1(um + un + eta, tau) * theta1(um - un + eta, tau);
    R *= theta1(um + un - eta, tau) * theta1(um - un - eta, tau);
  }
  return {L, R};
}

// Odd in u_m, so theta1(2 u_m) removes the trivial zeros at the half periods.
inline std::vector<cplx> bethe_function(const Quad& a, const std::vector<cplx>& u, cplx eta, cplx tau) {
  std::vector<cplx> F(u.size());
  for (std::size_t m = 0; m < u.size(); ++m) {
    auto s = bethe_sides(static_cast<int>(m), a, u, eta, tau);
    F[m] = (s[0] - s[1]) / theta1(2.0 * u[m], tau);
  }
  return F;
}

// u -> u - n tau - m with the real coordinates in [0, 1)
inline cplx reduce_to_cell(cplx u, cplx tau) {
  double y = u.imag() / tau.imag();
  double n = std::floor(y);
  if (y - n > 1.0 - 1e-12) n += 1.0;
  u -= n * tau;
  double m = std::floor(u.real());
  if (u.real() - m > 1.0 - 1e-12) m += 1.0;
  return u - m;
}

}  // namespace detail

// |LHS/RHS - 1| per equation, LHS = prod theta1(a_k + u_m)/theta1(a_k - u_m)
inline std::vector<double> bethe_system_residual(const BetheConfig& c) {
  std::vector<double> r(c.N);
  for (int m = 0; m < c.N; ++m) {
    cplx L = 1.0, R = 1.0;
    for (auto ak : c.a) L *= c.th1(ak + c.roots[m]) / detail::nonzero_theta1(ak - c.roots[m], c.tau, "bethe_system");
    for (auto un : c.roots) {
      R *= c.th1(c.roots[m] + un - c.eta) * c.th1(c.roots[m] - un - c.eta);
      R /= detail::nonzero_theta1(c.roots[m] + un + c.eta, c.tau, "bethe_system") *
           detail::nonzero_theta1(c.roots[m] - un + c.eta, c.tau, "bethe_system");
    }
    r[m] = std::abs(L / R - 1.0);
  }
  return r;
}

inline constexpr double bethe_tol = 1e-10;

inline std::vector<std::vector<cplx>> default_bethe_seeds(int N) {
  if (N == 1) return {{{0.2, 0.1}}, {{0.3, 0.2}}, {{0.1, -0.1}}, {{0.4, 0.05}}};
  std::vector<std::vector<cplx>> s;
  for (double x1 : {0.1, 0.2, 0.3, 0.4})
    for (double x2 : {0.15, 0.25, 0.35})
      for (double y : {0.05, 0.15}) s.push_back({cplx(x1, y), cplx(x2, -y)});
  return s;
}

// Newton iteration on the cleared Bethe equations with a central-difference
// Jacobian; seeds are tried in order and the first converged one wins.
inline BetheConfig bethe_solve(int N, const Quad& a, cplx eta, cplx tau,
                               std::vector<std::vector<cplx>> seeds = {}) {
  if (N != 1 && N != 2) throw invalid_argument("bethe_solve: N must be 1 or 2");
  require_tau(tau);
  require_delta_sum(a, -2.0 * double(N) * eta, "bethe_solve");
  if (seeds.empty()) seeds = default_bethe_seeds(N);
  std::string diag;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    std::vector<cplx> u = seeds[s];
    if (static_cast<int>(u.size()) != N) throw invalid_argument("bethe_solve: seed size must equal N");
    std::string why = "no convergence";
    try {
      for (int it = 0; it < 100; ++it) {
        auto F = detail::bethe_function(a, u, eta, tau);
        const double h = 1e-6;
        std::vector<cplx> step(N);
        if (N == 1) {
          auto up = detail::bethe_function(a, {u[0] + h}, eta, tau)[0];
          auto dn = detail::bethe_function(a, {u[0] - h}, eta, tau)[0];
          step[0] = F[0] / ((up - dn) / (2.0 * h));
        } else {
          cplx J[2][2];
          for (int k = 0; k < 2; ++k) {
            auto up = u, dn = u;
            up[k] += h;
            dn[k] -= h;
            auto Fu = detail::bethe_function(a, up, eta, tau), Fd = detail::bethe_function(a, dn, eta, tau);
            for (int m = 0; m < 2; ++m) J[m][k] = (Fu[m] - Fd[m]) / (2.0 * h);
          }
          cplx det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
          if (det == 0.0 || !finite(det)) break;
          step[0] = (F[0] * J[1][1] - J[0][1] * F[1]) / det;
          step[1] = (J[0][0] * F[1] - J[1][0] * F[0]) / det;
        }
        double sz = 0.0;
        for (int m = 0; m < N; ++m) {
          u[m] -= step[m];
          sz = std::max(sz, std::abs(step[m]));
        }
        if (!(sz < 10.0)) break;
        if (sz < 1e-15) break;
      }
      for (auto& x : u) x = detail::reduce_to_cell(x, tau);
      // trivial roots at half periods and coincident pairs collapse psi
      bool degenerate = false;
      for (auto x : u)
        if (std::abs(theta1(2.0 * x, tau)) < 1e-6) degenerate = true;
      if (N == 2 && (std::abs(theta1(u[0] - u[1], tau)) < 1e-6 || std::abs(theta1(u[0] + u[1], tau)) < 1e-6))
        degenerate = true;
      if (degenerate) {
        why = "degenerate root";
      } else {
        if (N == 2 && (u[1].real() < u[0].real() || (u[1].real() == u[0].real() && u[1].imag() < u[0].imag())))
          std::swap(u[0], u[1]);
        BetheConfig cfg(N, a, u, eta, tau);
        auto r = bethe_system_residual(cfg);
        double m = *std::max_element(r.begin(), r.end());
        if (m < bethe_tol) return cfg;
        char buf[64];
        std::snprintf(buf, sizeof buf, "residual %.3g", m);
        why = buf;
      }
    } catch (const std::exception& e) {
      why = e.what();
    }
    diag += "seed " + std::to_string(s) + ": " + why + "; ";
  }
  throw solver_failure("bethe_solve: no seed converged (" + diag + ")");
}

// E from u = a_l, l = 1..4
inline cplx bethe_energy(const BetheConfig& c, int l) {
  if (l < 1 || l > 4) throw invalid_argument("bethe_energy: l must be 1..4");
  cplx al = c.a[l - 1], E = 1.0;
  for (auto ak : c.a) E *= c.th1(ak + al);
  E /= detail::nonzero_theta1(2.0 * al, c.tau, "bethe_energy");
  for (auto un : c.roots) {
    E *= c.th1(al + un + c.eta) * c.th1(al - un + c.eta);
    E /= detail::nonzero_theta1(al + un, c.tau, "bethe_energy") * detail::nonzero_theta1(al - un, c.tau, "bethe_energy");
  }
  return E;
}

inline double bethe_energy_spread(const BetheConfig& c) {
  cplx E1 = bethe_energy(c, 1);
  double m = 0.0;
  for (int l = 2; l <= 4; ++l) m = std::max(m, std::abs(bethe_energy(c, l) - E1));
  return m / std::abs(E1);
}

// |Delta psi - E psi| / (|E psi| + term scale of Delta psi)
inline double devp_residual(cplx u, const BetheConfig& c) {
  SklyaninParams P(c.eta, c.tau, 0.0);
  auto D = delta_operator(c.a, P);
  Fn psi = [&c](cplx x) { return bethe_psi(x, c); };
  cplx E = bethe_energy(c, 1);
  cplx lhs = D(psi, u), rhs = E * psi(u);
  double scale = D.op().scale(psi, u);
  return std::abs(lhs - rhs) / (std::abs(rhs) + scale);
}

// ---- Heun limit -----------------------------------------------------------------

// -d^2/du^2 log theta1(u)
inline cplx weierstrass_p(cplx u, cplx tau) {
  auto j = jacobi_theta_jet(1, u, tau);
  if (!(std::abs(j.f) > detail::theta_zero_tol)) throw pole_error("weierstrass_p: u on the period lattice");
  cplx l1 = j.d1 / j.f;
  return -(j.d2 / j.f - l1 * l1);
}

using Alpha4 = std::array<double, 4>;

// -f'' + sum alpha_i (alpha_i - 1) P(u + omega_i/2) f, omega = (0, 1, tau, 1 + tau)
inline cplx heun_l_apply(const Fn& f, const Fn& f2, cplx u, const Alpha4& al, cplx tau) {
  const cplx om[4] = {0.0, 1.0, tau, 1.0 + tau};
  cplx V = 0.0;
  for (int i = 0; i < 4; ++i) V += al[i] * (al[i] - 1.0) * weierstrass_p(u + om[i] / 2.0, tau);
  return -f2(u) + V * f(u);
}

// Gauge-transformed operator from its two-term display with
// a = (alpha0 e, 1/2 + alpha1 e, tau/2 + alpha2 e, -(1+tau)/2 + alpha3 e).
inline cplx heun_delta_tilde(const Fn& f, cplx u, const Alpha4& al, cplx tau, double e) {
  const cplx a[4] = {al[0] * e, 0.5 + al[1] * e, tau / 2.0 + al[2] * e, -(1.0 + tau) / 2.0 + al[3] * e};
  cplx p = nome_from_tau(tau), pp = qpochhammer(p, Nome(p));
  cplx chi = I * p_eighth(tau) * std::exp(pi * I * (al[2] - al[3]) * e) / (pp * pp * pp);
  cplx num = 1.0;
  for (auto x : a) num *= theta1(u - x, tau) * theta1(u + x - e, tau);
  cplx den = detail::nonzero_theta1(2.0 * u, tau, "heun_delta_tilde") *
             detail::nonzero_theta1(2.0 * u - 2.0 * e, tau, "heun_delta_tilde");
  return f(u + e) - chi * chi * num / den * f(u - e);
}

struct HeunLimit {
  std::vector<double> eta, r, orders;
  double order = 0.0;
  bool precision_floor = false;
};

// r(eta) = |(Delta~ - 2 + eta^2 L) f(u)|, order from the last halving
inline HeunLimit heun_limit_order(const Fn& f, const Fn& f2, cplx u, const Alpha4& al, cplx tau,
                                  const std::vector<double>& etas, bool with_L = true) {
  if (etas.size() < 2) throw invalid_argument("heun_limit_order: need at least two eta values");
  HeunLimit h;
  cplx Lf = with_L ? heun_l_apply(f, f2, u, al, tau) : cplx(0.0);
  cplx f0 = f(u);
  for (double e : etas) {
    if (!(e > 0.0)) throw invalid_argument("heun_limit_order: eta must be positive");
    double r = std::abs(heun_delta_tilde(f, u, al, tau, e) - 2.0 * f0 + e * e * Lf);
    h.eta.push_back(e);
    h.r.push_back(r);
    if (r < 1e-12 * std::max(1.0, std::abs(f0))) h.precision_floor = true;
  }
  for (std::size_t i = 0; i + 1 < h.r.size(); ++i)
    h.orders.push_back(std::log(h.r[i] / h.r[i + 1]) / std::log(h.eta[i] / h.eta[i + 1]));
  h.order = h.orders.back();
  return h;
}

// ---- van Diejen Hamiltonian -------------------------------------------------------

struct VanDiejenConfig {
  std::array<cplx, 8> eps;
  BasePair bs;

  VanDiejenConfig(const std::array<cplx, 8>& e, const BasePair& b) : eps(e), bs(b) {
    for (auto x : eps) {
      require_finite(x, "VanDiejenConfig");
      if (x == 0.0) throw invalid_argument("VanDiejenConfig: zero parameter");
    }
    cplx P = 1.0;
    for (auto x : eps) P *= x;
    cplx target = bs.pq() * bs.pq();
    if (!(std::abs(P - target) <= balancing_tol * std::abs(target)))
      throw invalid_argument("VanDiejenConfig: balancing prod eps = p^2 q^2 violated");
  }
  // eps_{1..4} = +-q^{1/2}, +-(pq)^{1/2} and eps_5 = p e5 with e5 e6 e7 e8 = 1
  static VanDiejenConfig reduced(cplx e5, cplx e6, cplx e7, const BasePair& b) {
    cplx sq = std::sqrt(b.q), spq = std::sqrt(b.pq());
    return VanDiejenConfig({sq, -sq, spq, -spq, b.p * e5, e6, e7, 1.0 / (e5 * e6 * e7)}, b);
  }
  bool reduction_flags() const {
    cplx sq = std::sqrt(bs.q), spq = std::sqrt(bs.pq());
    const cplx want[4] = {sq, -sq, spq, -spq};
    for (int k = 0; k < 4; ++k)
      if (!(std::abs(eps[k] - want[k]) <= 1e-12 * std::abs(want[k]))) return false;
    return true;
  }
  cplx A(cplx x) const {
    Nome n = bs.nome_p();
    cplx r = 1.0;
    for (auto e : eps) r *= theta(e * x, n);
    return r / thetas(n, x * x, bs.q * x * x);
  }
};

// H f(x) = A(x)(f(qx) - f(x)) + A(1/x)(f(x/q) - f(x))
inline cplx vd_hamiltonian_apply(const VanDiejenConfig& c, const Fn& f, cplx x) {
  cplx q = c.bs.q, fx = f(x);
  return c.A(x) * (f(q * x) - fx) + c.A(1.0 / x) * (f(x / q) - fx);
}

// H against -e5^{-1}(D(e5..e8; p; q^2) - e5^{-1} theta(e5 e6, e5 e7, e5 e8; p)),
// normalized by the larger term scale of the two sides
inline double vd_reduction_residual(const VanDiejenConfig& c, const Fn& f, cplx x) {
  if (!c.reduction_flags()) throw invalid_argument("vd_reduction_residual: reduction constraints on eps_1..4 not set");
  const BasePair& b = c.bs;
  cplx e5 = c.eps[4] / b.p, e6 = c.eps[5], e7 = c.eps[6], e8 = c.eps[7];
  if (!(std::abs(e5 * e6 * e7 * e8 - 1.0) <= balancing_tol))
    throw invalid_argument("vd_reduction_residual: eps_5 ... eps_8 must multiply to 1 after eps_5 -> eps_5 / p");
  cplx q = b.q, fx = f(x), fu = f(q * x), fd = f(x / q);
  cplx Ax = c.A(x), Ai = c.A(1.0 / x);
  cplx H = Ax * (fu - fx) + Ai * (fd - fx);
  double sH = std::abs(Ax) * (std::abs(fu) + std::abs(fx)) + std::abs(Ai) * (std::abs(fd) + std::abs(fx));
  DOp D{e5, e6, e7, e8, b.p, q, 1.0};
  auto C = d_coefficients(D, x);
  cplx k = thetas(b.nome_p(), e5 * e6, e5 * e7, e5 * e8) / e5;
  cplx R = -(C[0] * fu + C[1] * fd - k * fx) / e5;
  double sR = (std::abs(C[0] * fu) + std::abs(C[1] * fd) + std::abs(k * fx)) / std::abs(e5);
  double m = std::max(sH, sR);
  return m == 0.0 ? 0.0 : std::abs(H - R) / m;
}

// ---- zero modes ---------------------------------------------------------------------

struct ZeroModeConfig {
  cplx c, t5, t6;
  BasePair bs;

  ZeroModeConfig(cplx c_, cplx t5_, cplx t6_, const BasePair& b) : c(c_), t5(t5_), t6(t6_), bs(b) {
    for (auto x : {c, t5, t6}) {
      require_finite(x, "ZeroModeConfig");
      if (x == 0.0) throw invalid_argument("ZeroModeConfig: zero parameter");
    }
    cplx want = bs.p * c * c;
    if (!(std::abs(t5 * t6 - want) <= balancing_tol * std::abs(want)))
      throw invalid_argument("ZeroModeConfig: need t5 t6 = p c^2");
  }
  static ZeroModeConfig from_c_t6(cplx c, cplx t6, const BasePair& b) {
    return ZeroModeConfig(c, b.p * c * c / t6, t6, b);
  }
  // D(c t6, c/t6, c/(q t6), pq/(c t5); p; q^2), shift q
  DOp op() const {
    cplx q = bs.q;
    return {c * t6, c / t6, c / (q * t6), bs.pq() / (c * t5), bs.p, q, 1.0};
  }
};

// Gamma_{p,q^2}(q^2 t6/c x^{+-}, c t5/p x^{+-}) / Gamma_{p,q^2}(q c t6 x^{+-}, q c/t6 x^{+-})
inline cplx zero_mode_psi2(cplx x, const ZeroModeConfig& z) {
  require_finite(x, "zero_mode_psi2");
  if (x == 0.0) throw invalid_argument("zero_mode_psi2: x = 0");
  cplx p = z.bs.p, q = z.bs.q, c = z.c;
  BasePair b2(p, q * q, z.bs.eps);
  return gamma_pm(q * q * z.t6 / c, x, b2) * gamma_pm(c * z.t5 / p, x, b2) /
         (gamma_pm(q * c * z.t6, x, b2) * gamma_pm(q * c / z.t6, x, b2));
}

// V(q^{1/2}/c, -q^{1/2}/c, (pq)^{1/2}/c, -(pq)^{1/2}/c, t5, t6, c/x, cx) / Gamma(c x^{+-} t6^{+-}),
// with V evaluated after the second E7 transformation, where its parameters
// are admissible for |x| near 1.
inline QuadratureResult zero_mode_psi1(cplx x, const ZeroModeConfig& z, const QuadratureSpec& spec = {}) {
  require_finite(x, "zero_mode_psi1");
  if (x == 0.0) throw invalid_argument("zero_mode_psi1: x = 0");
  const BasePair& b = z.bs;
  cplx c = z.c, sq = std::sqrt(b.q), spq = std::sqrt(b.pq());
  Params8 t{sq / c, -sq / c, spq / c, -spq / c, z.t5, z.t6, c / x, c * x};
  cplx sT = std::sqrt(b.p) * c * c, sU = std::sqrt(b.p) * b.q / (c * c);
  Params8 tp;
  for (int j = 0; j < 4; ++j) tp[j] = sU / t[j];
  for (int j = 4; j < 8; ++j) tp[j] = sT / t[j];
  cplx pre = 1.0;
  for (int j = 0; j < 4; ++j)
    for (int k = 4; k < 8; ++k) pre *= gamma_pq(t[j] * t[k], b);
  auto v = v_quad(tp, b, spec);
  cplx den = gamma_pm(c * z.t6, x, b) * gamma_pm(c / z.t6, x, b);
  v.value *= pre / den;
  return v;
}

enum class ZeroMode { psi1, psi2 };

// |D psi (x)| over the larger of its two terms
inline Residual zero_mode_residual(ZeroMode which, cplx x, const ZeroModeConfig& z, const QuadratureSpec& spec = {}) {
  DOp D = z.op();
  auto C = d_coefficients(D, x);
  cplx up, dn;
  Residual r;
  if (which == ZeroMode::psi2) {
    up = zero_mode_psi2(D.h * x, z);
    dn = zero_mode_psi2(x / D.h, z);
  } else {
    auto a = zero_mode_psi1(D.h * x, z, spec), b = zero_mode_psi1(x / D.h, z, spec);
    up = a.value;
    dn = b.value;
    r.merge(a).merge(b);
  }
  cplx t1 = C[0] * up, t2 = C[1] * dn;
  r.value = std::abs(t1 + t2) / std::max(std::abs(t1), std::abs(t2));
  return r;
}

// |psi1/psi2 (q^2 x) - psi1/psi2 (x)| relative
inline Residual ellipticity_residual(cplx x, const ZeroModeConfig& z, const QuadratureSpec& spec = {}) {
  cplx q2 = z.bs.q * z.bs.q;
  auto a = zero_mode_psi1(x, z, spec), b = zero_mode_psi1(q2 * x, z, spec);
  cplx r1 = a.value / zero_mode_psi2(x, z), r2 = b.value / zero_mode_psi2(q2 * x, z);
  Residual r(rel_diff(r1, r2));
  r.merge(a).merge(b);
  return r;
}

}  // namespace ellhyp
