#pragma once
// q-Pochhammer symbols, the short theta function theta(z;p) and the Jacobi
// theta functions with characteristics.

#include "core.hpp"

namespace ellhyp {

struct Nome {
  cplx p;
  double eps = 1e-17;

  Nome(cplx p_, double eps_ = 1e-17) : p(p_), eps(eps_) {
    if (!finite(p)) throw invalid_argument("Nome: non-finite p");
    if (!(std::abs(p) < 1.0)) throw invalid_argument("Nome: |p| must be < 1");
    if (!(eps > 0.0 && eps <= 1e-8)) throw invalid_argument("Nome: eps outside (0, 1e-8]");
  }
};

// (z;p)_inf, stopped once the geometric tail |z||p|^j/(1-|p|) drops below eps.
inline cplx qpochhammer(cplx z, const Nome& n) {
  require_finite(z, "qpochhammer");
  const double ap = std::abs(n.p);
  const double scale = 1.0 / (1.0 - ap);
  cplx r = 1.0, zj = z;
  double m = std::abs(z);
  for (int j = 0; j < 100000; ++j) {
    if (m * scale < n.eps) return r;
    r *= 1.0 - zj;
    zj *= n.p;
    m *= ap;
    if (zj == 0.0) return r;
  }
  return r;
}

inline cplx theta(cplx z, const Nome& n) {
  require_finite(z, "theta");
  if (z == 0.0) throw invalid_argument("theta: z = 0 is an essential singularity");
  return qpochhammer(z, n) * qpochhammer(n.p / z, n);
}

// theta(z1;p) theta(z2;p) ...
template <class... Z>
cplx thetas(const Nome& n, Z... z) {
  return (cplx(1.0) * ... * theta(cplx(z), n));
}

inline cplx theta_prod(const Nome& n, std::initializer_list<cplx> zs) {
  cplx r = 1.0;
  for (auto z : zs) r *= theta(z, n);
  return r;
}

// theta(x y^{+-};p)
inline cplx theta_pm(cplx x, cplx y, const Nome& n) {
  if (x == 0.0 || y == 0.0) throw invalid_argument("theta_pm: zero argument");
  return theta(x * y, n) * theta(x / y, n);
}

// ---- additive theta functions -----------------------------------------------

inline void require_tau(cplx tau) {
  if (!finite(tau) || !(tau.imag() > 0.0)) throw invalid_argument("theta: Im(tau) must be > 0");
}

// theta_{ab}(u|tau) and its first two u-derivatives, summed in paired +-k order
// from the centre outward.
struct ThetaJet {
  cplx f, d1, d2;
};

inline ThetaJet theta_char_jet(int a, int b, cplx u, cplx tau, double eps = 1e-17) {
  require_tau(tau);
  require_finite(u, "theta_char");
  if ((a != 0 && a != 1) || (b != 0 && b != 1))
    throw invalid_argument("theta_char: characteristics must be 0 or 1");
  const double ha = a / 2.0;
  const cplx w = u + b / 2.0;
  ThetaJet s{0.0, 0.0, 0.0};
  auto add = [&](int k) {
    double A = k + ha;
    cplx e = std::exp(I * pi * tau * (A * A) + 2.0 * pi * I * A * w);
    cplx c = 2.0 * pi * I * A;
    s.f += e;
    s.d1 += c * e;
    s.d2 += c * c * e;
    return std::abs(e) * (1.0 + std::abs(c) * (1.0 + std::abs(c)));
  };
  // terms decay once |k| exceeds |Im w| / Im tau
  const int kmin = static_cast<int>(std::abs(w.imag()) / tau.imag()) + 2;
  add(0);
  if (a == 1) add(-1);
  for (int n = 1; n < 100000; ++n) {
    double m = add(n) + add(a == 1 ? -n - 1 : -n);
    double scale = std::abs(s.f) + std::abs(s.d1) + std::abs(s.d2) + 1.0;
    if (n > kmin && m < eps * scale) break;
  }
  return s;
}

inline cplx theta_char(int a, int b, cplx u, cplx tau) { return theta_char_jet(a, b, u, tau).f; }

// theta_1 = -theta_11, theta_2 = theta_10, theta_3 = theta_00, theta_4 = theta_01
inline ThetaJet jacobi_theta_jet(int k, cplx u, cplx tau) {
  switch (k) {
    case 1: {
      auto j = theta_char_jet(1, 1, u, tau);
      return {-j.f, -j.d1, -j.d2};
    }
    case 2: return theta_char_jet(1, 0, u, tau);
    case 3: return theta_char_jet(0, 0, u, tau);
    case 4: return theta_char_jet(0, 1, u, tau);
  }
  throw invalid_argument("jacobi_theta: index must be in 1..4");
}

inline cplx jacobi_theta(int k, cplx u, cplx tau) { return jacobi_theta_jet(k, u, tau).f; }

inline cplx theta1(cplx u, cplx tau) { return jacobi_theta(1, u, tau); }

// p^{1/8} with p = e^{2 pi i tau}, taken as e^{pi i tau / 4}
inline cplx p_eighth(cplx tau) { return std::exp(I * pi * tau / 4.0); }

inline cplx nome_from_tau(cplx tau) {
  require_tau(tau);
  return std::exp(2.0 * pi * I * tau);
}

}  // namespace ellhyp
