#pragma once
// The registered identity checks. Each check draws an admissible scenario from
// a seed and evaluates one residual; the CLI suite and the acceptance binary
// both read this catalog.

#include <functional>
#include <string>
#include <vector>

#include "biorthogonality.hpp"
#include "heun_bethe.hpp"
#include "report.hpp"
#include "sampling.hpp"
#include "sklyanin.hpp"

namespace ellhyp {

struct CheckContext {
  BasePair bases{0.11, 0.23};
  QuadratureSpec spec{};
};

struct Outcome {
  double residual = 0.0;
  int nodes_used = 0;
  bool converged = true;
  std::string notes;

  Outcome() = default;
  Outcome(double r) : residual(r) {}
  Outcome(const Residual& r) : residual(r.value), nodes_used(r.nodes_used), converged(r.converged) {}
  Outcome& note(std::string s) {
    notes = std::move(s);
    return *this;
  }
  Outcome& worst(const Outcome& o) {
    residual = std::max(residual, o.residual);
    nodes_used = std::max(nodes_used, o.nodes_used);
    converged = converged && o.converged;
    return *this;
  }
};

struct Check {
  std::string id;
  int criterion = 0;  // acceptance criterion, 0 for invariants outside the numbered list
  double tolerance = 0.0;
  bool expensive = false;
  int samples = 1;
  std::string restriction;  // contour / parameter restriction, copied into report notes
  std::function<ParamMap(Sampler&, const CheckContext&)> sample;
  std::function<Outcome(const ParamMap&, const CheckContext&)> run;
};

namespace checks_detail {

inline cplx get(const ParamMap& P, const std::string& k) {
  auto it = P.find(k);
  if (it == P.end()) throw invalid_argument("scenario: missing parameter " + k);
  return it->second;
}

inline double get_real(const ParamMap& P, const std::string& k) { return get(P, k).real(); }

template <std::size_t N>
std::array<cplx, N> get_n(const ParamMap& P, const std::string& prefix) {
  std::array<cplx, N> v{};
  for (std::size_t i = 0; i < N; ++i) v[i] = get(P, prefix + std::to_string(i + 1));
  return v;
}

template <std::size_t N>
void put_n(ParamMap& P, const std::string& prefix, const std::array<cplx, N>& v) {
  for (std::size_t i = 0; i < N; ++i) P[prefix + std::to_string(i + 1)] = v[i];
}

inline BasePair bases_of(const ParamMap& P) { return BasePair(get(P, "p"), get(P, "q")); }

inline void put_bases(ParamMap& P, const BasePair& b) {
  P["p"] = b.p;
  P["q"] = b.q;
}

// Pointwise checks keep their points implicit: a 32-bit point seed and a count.
inline void put_points(ParamMap& P, Sampler& S, int n) {
  P["point_seed"] = double(S.bits32());
  P["points"] = double(n);
}

template <class F>
Outcome max_over_points(const ParamMap& P, F&& one) {
  Sampler S(static_cast<std::uint64_t>(get_real(P, "point_seed")));
  int n = static_cast<int>(get_real(P, "points"));
  Outcome o;
  for (int i = 0; i < n; ++i) o.worst(Outcome(one(S)));
  return o;
}

inline cplx cell_point(Sampler& S, cplx tau) { return S.uniform() + S.uniform() * tau; }

// n-1 free moduli in [lo, hi], the last solved from prod t = target
template <std::size_t N>
std::array<cplx, N> balanced(Sampler& S, double lo, double hi, cplx target, double margin) {
  std::array<cplx, N> t{};
  cplx pr = 1.0;
  for (std::size_t i = 0; i + 1 < N; ++i) {
    t[i] = S.polar(lo, hi);
    pr *= t[i];
  }
  t[N - 1] = target / pr;
  for (auto x : t) need(std::abs(x) <= 1.0 - margin, "pole margin |t_k| <= 1 - delta");
  return t;
}

inline cplx theta_times(const Nome& n, cplx x, cplx y) { return theta_pm(x, y, n); }

// jets of a product of theta1 factors, for the Heun test functions
struct Jet {
  cplx f, d1, d2;
};
inline Jet jet_product(const std::vector<cplx>& shifts, cplx u, cplx tau) {
  Jet r{1.0, 0.0, 0.0};
  for (auto s : shifts) {
    auto j = jacobi_theta_jet(1, u + s, tau);
    r = {r.f * j.f, r.d1 * j.f + r.f * j.d1, r.d2 * j.f + 2.0 * r.d1 * j.d1 + r.f * j.d2};
  }
  return r;
}

struct TestFn {
  const char* name;
  Fn f;
};

// Test functions for the Sklyanin relations: an even theta product, a
// 1-periodic exponential and an aperiodic mix.
inline std::vector<TestFn> sklyanin_test_functions(cplx tau) {
  return {{"theta1(u+-0.3)", [tau](cplx u) { return theta1(u + 0.3, tau) * theta1(u - 0.3, tau); }},
          {"e^{2 pi i u}+1", [](cplx u) { return std::exp(2.0 * pi * I * u) + 1.0; }},
          {"e^{0.7u}+u^2+e^{2 pi i u}", [](cplx u) { return std::exp(0.7 * u) + u * u + std::exp(2.0 * pi * I * u); }}};
}

inline SklyaninParams sklyanin_of(const ParamMap& P) {
  return SklyaninParams(get(P, "eta"), get(P, "tau"), get(P, "g"));
}

inline ParamMap sklyanin_scenario(Sampler& S) {
  auto C = SklyaninParams::canonical();
  ParamMap P{{"eta", C.eta}, {"tau", C.tau}, {"g", C.g}};
  // Re u in [0.05, 0.45], |Im u| <= 0.1 keeps theta1(2u) away from zero
  P["u"] = S.box(0.05, 0.45, -0.1, 0.1);
  return P;
}

template <class F>
Outcome over_test_functions(const ParamMap& P, F&& one) {
  auto fs = sklyanin_test_functions(get(P, "tau"));
  Outcome o;
  for (const auto& t : fs) o.worst(Outcome(one(t.f)));
  return o;
}

// the eh / D_x parameter family: s1..s4 in [0.6,0.85], s5 in [0.15,0.2], c = 0.2
inline ParamMap eh_scenario(Sampler& S, const CheckContext& ctx) {
  const BasePair& b = ctx.bases;
  return draw(S, [&](Sampler& R) {
    ParamMap P;
    put_bases(P, b);
    const cplx c = 0.2;
    Params6 s{};
    cplx pr = 1.0;
    for (int i = 0; i < 4; ++i) pr *= (s[i] = R.polar(0.6, 0.85));
    pr *= (s[4] = R.polar(0.15, 0.2));
    s[5] = b.pq() * b.pq() / (pr * c * c);
    need(std::abs(s[5]) <= 1.0 - ctx.spec.margin, "pole margin |s6| <= 1 - delta");
    put_n(P, "s", s);
    P["c"] = c;
    P["x"] = R.phase();
    P["t3p"] = R.polar(0.3, 0.7);
    P["t3pp"] = R.polar(0.3, 0.7);
    return P;
  });
}

inline Params8 eh_t(const ParamMap& P) { return eh_params(get_n<6>(P, "s"), get(P, "c"), get(P, "x")); }

// pointwise biorthogonality scenario
inline ParamMap bio_point_scenario(Sampler& S, const CheckContext& ctx) {
  ParamMap P;
  put_bases(P, ctx.bases);
  P["a"] = S.polar(0.4, 0.7);
  P["b"] = S.polar(0.4, 0.7);
  P["c"] = S.polar(0.5, 0.8);
  P["d"] = S.polar(0.5, 0.8);
  P["c'"] = S.polar(0.8, 1.0);
  P["e"] = S.polar(0.4, 0.6);
  P["h"] = S.polar(0.4, 0.6);
  P["z"] = S.polar(0.9, 1.1);
  P["w"] = S.polar(0.7, 0.9);
  return P;
}

struct BioPoint {
  BasePair bs;
  cplx a, b, c, d, e, h, z, w;
  RootPair cd, cdp;
};

inline BioPoint bio_point(const ParamMap& P) {
  BioPoint x{bases_of(P), get(P, "a"), get(P, "b"), get(P, "c"), get(P, "d"), get(P, "e"), get(P, "h"),
             get(P, "z"), get(P, "w"), RootPair::of(get(P, "c"), get(P, "d")), {}};
  cplx scp = std::sqrt(get(P, "c'"));
  x.cdp = RootPair{scp, x.cd.sqrt_cd() / scp};
  return x;
}

inline QuadratureSpec key_relation_outer(const QuadratureSpec& s) {
  QuadratureSpec o = s;
  o.n0 = 64;
  o.rtol = 1e-9;
  o.n_max = std::max(1024, s.n0);
  return o;
}

inline Outcome bethe_outcome(int N, const ParamMap& P) {
  cplx eta = get(P, "eta"), tau = get(P, "tau");
  Quad a = BetheConfig::complete(get(P, "a1"), get(P, "a2"), get(P, "a3"), N, eta);
  BetheConfig c = N == 0 ? BetheConfig(0, a, {}, eta, tau) : bethe_solve(N, a, eta, tau);
  Outcome o = max_over_points(P, [&](Sampler& S) {
    cplx u;
    do {
      u = cell_point(S, tau);
    } while (!(std::abs(theta1(2.0 * u, tau)) > 1e-3));
    return devp_residual(u, c);
  });
  double spread = bethe_energy_spread(c);
  o.residual = std::max(o.residual, spread);
  std::string roots;
  for (auto r : c.roots) roots += (roots.empty() ? "" : " ") + to_string(r);
  o.notes = "roots: " + (roots.empty() ? std::string("none") : roots);
  return o;
}

inline ParamMap bethe_scenario(Sampler& S) {
  ParamMap P{{"eta", cplx(0.07, 0.21)},
             {"tau", cplx(0.0, 0.5)},
             {"a1", cplx(0.11, 0.02)},
             {"a2", cplx(0.23, -0.05)},
             {"a3", cplx(-0.31, 0.04)}};
  put_points(P, S, 10);
  return P;
}

inline ZeroModeConfig zero_mode_of(const ParamMap& P) {
  return ZeroModeConfig::from_c_t6(get(P, "c"), get(P, "t6"), bases_of(P));
}

inline ParamMap zero_mode_scenario(Sampler& S, const CheckContext& ctx) {
  ParamMap P;
  put_bases(P, ctx.bases);
  P["c"] = std::polar(0.58, 0.2);
  P["t6"] = std::polar(0.2, 0.7);
  P["x1"] = S.phase();
  P["x2"] = S.polar(0.9, 1.0);
  return P;
}

inline std::string e7_name(E7Kind k) {
  return k == E7Kind::first ? "first" : k == E7Kind::second ? "second" : "third";
}

}  // namespace checks_detail

// The catalog, in definition order.
inline const std::vector<Check>& check_catalog() {
  using namespace checks_detail;
  static const std::vector<Check> catalog = [] {
    std::vector<Check> C;

    // ---- theta functions, tau = 0.5i, 50 points each ----
    auto theta_sample = [](Sampler& S, const CheckContext&) {
      ParamMap P{{"tau", cplx(0.0, 0.5)}};
      put_points(P, S, 50);
      return P;
    };
    C.push_back({"theta.triple_product", 1, 1e-12, false, 1, "", theta_sample,
                 [](const ParamMap& P, const CheckContext&) {
                   cplx tau = get(P, "tau"), p = nome_from_tau(tau);
                   Nome n(p);
                   cplx pp = qpochhammer(p, n);
                   return max_over_points(P, [&](Sampler& S) {
                     cplx u = cell_point(S, tau);
                     cplx rhs = I * p_eighth(tau) * std::exp(-pi * I * u) * pp * theta(std::exp(2.0 * pi * I * u), n);
                     return rel_diff(theta1(u, tau), rhs);
                   });
                 }});
    C.push_back({"theta.quasi_periodicity", 1, 1e-12, false, 1, "", theta_sample,
                 [](const ParamMap& P, const CheckContext&) {
                   cplx tau = get(P, "tau");
                   return max_over_points(P, [&](Sampler& S) {
                     cplx u = cell_point(S, tau), t = theta1(u, tau);
                     return std::max(rel_diff(theta1(u + 1.0, tau), -t),
                                     rel_diff(theta1(u + tau, tau), -std::exp(-pi * I * tau - 2.0 * pi * I * u) * t));
                   });
                 }});
    C.push_back({"theta.duplication", 1, 1e-12, false, 1, "", theta_sample,
                 [](const ParamMap& P, const CheckContext&) {
                   cplx tau = get(P, "tau"), p = nome_from_tau(tau);
                   cplx pp = qpochhammer(p, Nome(p));
                   cplx chi = I * p_eighth(tau) / (pp * pp * pp);
                   return max_over_points(P, [&](Sampler& S) {
                     cplx u = cell_point(S, tau);
                     cplx rhs = chi * theta1(u, tau) * theta1(u + 0.5, tau) * theta1(u + tau / 2.0, tau) *
                                theta1(u - (1.0 + tau) / 2.0, tau);
                     return rel_diff(theta1(2.0 * u, tau), rhs);
                   });
                 }});
    C.push_back({"theta.add_add", 1, 1e-12, false, 1, "", theta_sample,
                 [](const ParamMap& P, const CheckContext&) {
                   cplx tau = get(P, "tau");
                   auto t2 = [&](cplx a, cplx b) { return theta1(a + b, tau) * theta1(a - b, tau); };
                   return max_over_points(P, [&](Sampler& S) {
                     cplx u = cell_point(S, tau), v = cell_point(S, tau), x = cell_point(S, tau),
                          y = cell_point(S, tau);
                     return term_residual({t2(u, x) * t2(v, y), -t2(u, y) * t2(v, x), -t2(x, y) * t2(u, v)});
                   });
                 }});
    C.push_back({"theta.add_mult", 1, 1e-12, false, 1, "", theta_sample,
                 [](const ParamMap& P, const CheckContext&) {
                   Nome n(nome_from_tau(get(P, "tau")));
                   return max_over_points(P, [&](Sampler& S) {
                     cplx u = S.polar(0.5, 1.5), v = S.polar(0.5, 1.5), x = S.polar(0.5, 1.5), y = S.polar(0.5, 1.5);
                     auto T = [&](cplx a, cplx b) { return theta_times(n, a, b); };
                     return term_residual({T(u, x) * T(v, y), -T(u, y) * T(v, x), -(v / x) * T(x, y) * T(u, v)});
                   });
                 }});
    C.push_back({"theta.jacobi_identity", 1, 1e-12, false, 1, "", theta_sample,
                 [](const ParamMap& P, const CheckContext&) {
                   cplx tau = get(P, "tau");
                   return max_over_points(P, [&](Sampler& S) {
                     std::array<cplx, 4> b{cell_point(S, tau), cell_point(S, tau), cell_point(S, tau),
                                           cell_point(S, tau)};
                     return jacobi_identity_residual(b, tau);
                   });
                 }});

    // ---- elliptic gamma, 50 points each ----
    auto gamma_sample = [](Sampler& S, const CheckContext& ctx) {
      ParamMap P;
      put_bases(P, ctx.bases);
      put_points(P, S, 50);
      return P;
    };
    auto gamma_points = [](const ParamMap& P, auto&& one) {
      BasePair b = bases_of(P);
      return max_over_points(P, [&](Sampler& S) { return one(S.polar(0.3, 0.9), b); });
    };
    C.push_back({"gamma.reflection", 2, 1e-11, false, 1, "", gamma_sample,
                 [gamma_points](const ParamMap& P, const CheckContext&) {
                   return gamma_points(P, [](cplx z, const BasePair& b) {
                     return rel_diff(gamma_pq(z, b) * gamma_pq(b.pq() / z, b), 1.0);
                   });
                 }});
    C.push_back({"gamma.shift_q", 2, 1e-12, false, 1, "", gamma_sample,
                 [gamma_points](const ParamMap& P, const CheckContext&) {
                   return gamma_points(P, [](cplx z, const BasePair& b) {
                     return rel_diff(gamma_pq(b.q * z, b), theta(z, b.nome_p()) * gamma_pq(z, b));
                   });
                 }});
    C.push_back({"gamma.shift_p", 2, 1e-12, false, 1, "", gamma_sample,
                 [gamma_points](const ParamMap& P, const CheckContext&) {
                   return gamma_points(P, [](cplx z, const BasePair& b) {
                     return rel_diff(gamma_pq(b.p * z, b), theta(z, b.nome_q()) * gamma_pq(z, b));
                   });
                 }});
    C.push_back({"gamma.duplication", 2, 1e-11, false, 1, "", gamma_sample,
                 [gamma_points](const ParamMap& P, const CheckContext&) {
                   return gamma_points(P, [](cplx z, const BasePair& b) {
                     cplx rhs = 1.0;
                     for (cplx m : {cplx(1.0), std::sqrt(b.q), std::sqrt(b.p), std::sqrt(b.pq())})
                       rhs *= gamma_pq(m * z, b) * gamma_pq(-m * z, b);
                     return rel_diff(gamma_pq(z * z, b), rhs);
                   });
                 }});
    C.push_back({"gamma.p_limit", 2, 1e-6, false, 1, "",
                 [](Sampler& S, const CheckContext& ctx) {
                   ParamMap P{{"p", 1e-8}, {"q", ctx.bases.q}};
                   put_points(P, S, 50);
                   return P;
                 },
                 [gamma_points](const ParamMap& P, const CheckContext&) {
                   return gamma_points(P, [](cplx z, const BasePair& b) {
                     return std::abs(gamma_pq(z, b) * qpochhammer(z, b.nome_q()) - 1.0);
                   });
                 }});

    auto omega_sample = [](cplx w1, cplx w2, cplx w3) {
      return [w1, w2, w3](Sampler& S, const CheckContext&) {
        ParamMap P{{"w1", w1}, {"w2", w2}, {"w3", w3}};
        put_points(P, S, 50);
        return P;
      };
    };
    auto omega_of = [](const ParamMap& P) { return OmegaTriple(get(P, "w1"), get(P, "w2"), get(P, "w3")); };
    auto u_point = [](Sampler& S) { return S.box(-0.3, 0.3, -0.1, 0.1); };
    auto modified_eqs = [omega_of, u_point](const ParamMap& P, const CheckContext&) {
      OmegaTriple w = omega_of(P);
      Nome np(w.p()), nr(w.r());
      return max_over_points(P, [&](Sampler& S) {
        cplx u = u_point(S), G = modified_gamma_g(u, w);
        double r1 = rel_diff(modified_gamma_g(u + w.w1, w), theta(std::exp(2.0 * pi * I * u / w.w2), np) * G);
        double r2 = rel_diff(modified_gamma_g(u + w.w2, w), theta(std::exp(2.0 * pi * I * u / w.w1), nr) * G);
        double r3 = rel_diff(modified_gamma_g(u + w.w3, w), std::exp(-pi * I * bernoulli_b22(u, w.w1, w.w2)) * G);
        return std::max({r1, r2, r3});
      });
    };
    C.push_back({"gamma.modified_equations", 2, 1e-10, false, 1, "",
                 omega_sample(1.0, cplx(2.0, 0.5), I), modified_eqs});
    C.push_back({"gamma.modified_equations_unit_q", 2, 1e-10, false, 1, "",
                 omega_sample(1.0, std::sqrt(2.0), I), modified_eqs});
    C.push_back({"gamma.modified_representations", 2, 1e-10, false, 1,
                 "|q| > 1 here, so the first representation is taken with omega1, omega2 exchanged",
                 omega_sample(1.0, cplx(2.0, 0.5), I),
                 [omega_of, u_point](const ParamMap& P, const CheckContext&) {
                   OmegaTriple w = omega_of(P);
                   return max_over_points(P, [&](Sampler& S) {
                     cplx u = u_point(S);
                     return rel_diff(modified_gamma_rep1(u, w.swap12()), modified_gamma_rep2(u, w));
                   });
                 }});
    auto symmetry = [omega_of, u_point](const ParamMap& P, const CheckContext&) {
      OmegaTriple w = omega_of(P);
      return max_over_points(P, [&](Sampler& S) {
        cplx u = u_point(S);
        return std::max(rel_diff(modified_gamma_rep2(u, w), modified_gamma_rep2(u, w.swap12())),
                        rel_diff(modified_gamma_g(u, w), modified_gamma_g(u, w.swap12())));
      });
    };
    C.push_back({"gamma.modified_symmetry", 0, 1e-10, false, 1, "", omega_sample(1.0, cplx(2.0, 0.5), I), symmetry});
    C.push_back({"gamma.modified_symmetry_unit_q", 0, 1e-10, false, 1, "", omega_sample(1.0, std::sqrt(2.0), I),
                 symmetry});
    C.push_back({"gamma.modified_reflection", 0, 1e-10, false, 1, "", omega_sample(1.0, cplx(2.0, 0.5), I),
                 [omega_of, u_point](const ParamMap& P, const CheckContext&) {
                   OmegaTriple w = omega_of(P);
                   Outcome o(rel_diff(modified_gamma_g(w.sum() / 2.0, w), 1.0));
                   o.worst(max_over_points(P, [&](Sampler& S) {
                     cplx u = u_point(S);
                     return rel_diff(modified_gamma_g(u, w) * modified_gamma_g(w.sum() - u, w), 1.0);
                   }));
                   return o;
                 }});

    // ---- quadrature ----
    C.push_back({"quadrature.laurent_exactness", 9, 1e-14, false, 1, "",
                 [](Sampler&, const CheckContext&) { return ParamMap{{"N", 64.0}}; },
                 [](const ParamMap& P, const CheckContext&) {
                   QuadratureSpec s;
                   s.n0 = s.n_max = static_cast<int>(get_real(P, "N"));
                   double m = 0.0;
                   for (int k = 1 - s.n0; k < s.n0; ++k) {
                     auto r = circle_mean([k](cplx z) { return std::pow(z, k); }, s);
                     m = std::max(m, std::abs(r.value - (k == 0 ? 1.0 : 0.0)));
                   }
                   return Outcome(m);
                 }});
    C.push_back({"quadrature.beta_convergence", 9, 0.1,  false, 1,
                 "residual is the largest error-estimate ratio per doubling above the 1e-14 floor",
                 [](Sampler&, const CheckContext& ctx) {
                   ParamMap P;
                   put_bases(P, ctx.bases);
                   Params6 t{0.7, 0.65, 0.6, 0.55 * std::exp(I * pi / 7.0), 0.5, 0.0};
                   t[5] = ctx.bases.pq() / (t[0] * t[1] * t[2] * t[3] * t[4]);
                   put_n(P, "t", t);
                   return P;
                 },
                 [](const ParamMap& P, const CheckContext&) {
                   BasePair b = bases_of(P);
                   auto t = get_n<6>(P, "t");
                   QuadratureSpec s;
                   s.n0 = 64;
                   s.n_max = 2048;
                   auto h = circle_mean_history([&](cplx z) { return ihm_integrand(t, z, b); }, s);
                   const double floor = 1e-14;
                   double worst = 0.0;
                   std::string trail;
                   for (std::size_t i = 1; i < h.size(); ++i) {
                     char buf[32];
                     std::snprintf(buf, sizeof buf, "%s%.1e", i > 1 ? " " : "", h[i].error_estimate);
                     trail += buf;
                     if (i + 1 < h.size() && h[i].error_estimate > floor && h[i + 1].error_estimate > floor)
                       worst = std::max(worst, h[i + 1].error_estimate / h[i].error_estimate);
                   }
                   Outcome o(worst);
                   o.nodes_used = h.back().nodes_used;
                   return o.note("error estimates from N=128: " + trail);
                 }});

    // ---- elliptic beta integral and V ----
    C.push_back({"integrals.elliptic_beta", 3, 1e-9, false, 20, "",
                 [](Sampler& S, const CheckContext& ctx) {
                   return draw(S, [&](Sampler& R) {
                     ParamMap P;
                     put_bases(P, ctx.bases);
                     put_n(P, "t", balanced<6>(R, 0.4, 0.8, ctx.bases.pq(), ctx.spec.margin));
                     return P;
                   });
                 },
                 [](const ParamMap& P, const CheckContext& ctx) {
                   BasePair b = bases_of(P);
                   auto t = get_n<6>(P, "t");
                   auto q = ihm_integral(BalancedParams(0, {t.begin(), t.end()}, b), ctx.spec);
                   Outcome o(Residual(rel_diff(q.value, elliptic_beta_closed(t, b)), q.nodes_used, q.converged));
                   return o;
                 }});
    auto v_sample = [](double lo, double hi, std::function<void(const Params8&, const BasePair&, double)> extra) {
      return [lo, hi, extra](Sampler& S, const CheckContext& ctx) {
        return draw(S, [&](Sampler& R) {
          ParamMap P;
          put_bases(P, ctx.bases);
          auto t = balanced<8>(R, lo, hi, ctx.bases.pq() * ctx.bases.pq(), ctx.spec.margin);
          if (extra) extra(t, ctx.bases, ctx.spec.margin);
          put_n(P, "t", t);
          P["perm_seed"] = double(R.bits32());
          return P;
        });
      };
    };
    C.push_back({"integrals.v_permutation", 4, 1e-11, false, 1, "", v_sample(0.4, 0.8, nullptr),
                 [](const ParamMap& P, const CheckContext& ctx) {
                   BasePair b = bases_of(P);
                   auto t = get_n<8>(P, "t");
                   auto v0 = v_quad(t, b, ctx.spec);
                   Outcome o(Residual(0.0, v0.nodes_used, v0.converged));
                   Sampler S(static_cast<std::uint64_t>(get_real(P, "perm_seed")));
                   for (int k = 0; k < 10; ++k) {
                     int i = S.index(8), j = S.index(7);
                     if (j >= i) ++j;
                     auto u = t;
                     std::swap(u[i], u[j]);
                     auto v = v_quad(u, b, ctx.spec);
                     o.worst(Outcome(Residual(rel_diff(v.value, v0.value), v.nodes_used, v.converged)));
                   }
                   return o;
                 }});
    C.push_back({"integrals.v_reduction", 4, 1e-9, false, 1, "",
                 [](Sampler& S, const CheckContext& ctx) {
                   return draw(S, [&](Sampler& R) {
                     const BasePair& b = ctx.bases;
                     Params8 t{};
                     t[0] = R.polar(0.4, 0.8);
                     t[4] = b.pq() / t[0];
                     cplx pr = b.pq();
                     for (int i : {1, 2, 3, 5, 6}) pr *= (t[i] = R.polar(0.4, 0.8));
                     t[7] = b.pq() * b.pq() / pr;
                     require_admissible(t, ctx.spec.margin, "v_reduction");
                     ParamMap P;
                     put_bases(P, b);
                     put_n(P, "t", t);
                     return P;
                   });
                 },
                 [](const ParamMap& P, const CheckContext& ctx) {
                   BasePair b = bases_of(P);
                   auto t = get_n<8>(P, "t");
                   if (!(std::abs(t[0] * t[4] / b.pq() - 1.0) <= balancing_tol))
                     throw invalid_argument("v_reduction: need t1 t5 = pq");
                   auto v = v_quad(t, b, ctx.spec);
                   cplx beta = elliptic_beta_closed({t[1], t[2], t[3], t[5], t[6], t[7]}, b);
                   return Outcome(Residual(rel_diff(v.value, beta), v.nodes_used, v.converged));
                 }});
    for (auto kind : {E7Kind::first, E7Kind::second, E7Kind::third}) {
      // both s and sqrt(pq)/s must be admissible for the third one
      double lo = kind == E7Kind::third ? 0.3 : 0.4, hi = kind == E7Kind::third ? 0.6 : 0.8;
      C.push_back({"integrals.e7_" + e7_name(kind), 4, 1e-8, false, 1, "",
                   v_sample(lo, hi, [kind](const Params8& t, const BasePair& b,
                                          double margin) { e7_transform(t, kind, b, margin); }),
                   [kind](const ParamMap& P, const CheckContext& ctx) {
                     return Outcome(e7_residual(get_n<8>(P, "t"), kind, bases_of(P), ctx.spec));
                   }});
    }
    C.push_back({"integrals.bailey_step", 0, 1e-8, true, 1,
                 "inner integral replaced by its closed form; needs |t_k/eps| < 1 and |t_i eps| < 1",
                 [](Sampler& S, const CheckContext& ctx) {
                   return draw(S, [&](Sampler& R) {
                     const BasePair& b = ctx.bases;
                     Params8 t{};
                     cplx pr = 1.0;
                     for (int i : {0, 1, 2}) pr *= (t[i] = R.polar(0.2, 0.35));
                     for (int i : {4, 5, 6, 7}) pr *= (t[i] = R.polar(0.5, 0.75));
                     t[3] = b.pq() * b.pq() / pr;
                     require_admissible(t, ctx.spec.margin, "bailey_step");
                     cplx eps = std::sqrt(t[4] * t[5] * t[6] * t[7] / b.pq());
                     for (int k = 4; k < 8; ++k) need(std::abs(t[k] / eps) <= 1.0 - ctx.spec.margin, "|t_k/eps| <= 1 - delta");
                     for (int k = 0; k < 4; ++k) need(std::abs(t[k] * eps) <= 1.0 - ctx.spec.margin, "|t_i eps| <= 1 - delta");
                     ParamMap P;
                     put_bases(P, b);
                     put_n(P, "t", t);
                     return P;
                   });
                 },
                 [](const ParamMap& P, const CheckContext& ctx) {
                   return Outcome(bailey_step_residual(get_n<8>(P, "t"), bases_of(P), ctx.spec, ctx.spec));
                 }});

    // ---- contiguous relations and the elliptic hypergeometric equation ----
    auto c1_like = [](cplx (*target)(const BasePair&)) {
      return [target](Sampler& S, const CheckContext& ctx) {
        return draw(S, [&](Sampler& R) {
          const BasePair& b = ctx.bases;
          Params8 t{};
          cplx pr = 1.0;
          for (int i = 0; i < 7; ++i) pr *= (t[i] = R.polar(0.3, 0.6));
          t[7] = target(b) / pr;
          need(std::abs(t[7]) <= 1.0 - ctx.spec.margin && std::abs(b.q * t[7]) <= 1.0 - ctx.spec.margin,
               "pole margin for t8 and q t8");
          ParamMap P;
          put_bases(P, b);
          put_n(P, "t", t);
          return P;
        });
      };
    };
    C.push_back({"integrals.contiguous_c1", 5, 1e-7, false, 1, "balancing p^2 q; unit circle, all shifted sets admissible",
                 c1_like([](const BasePair& b) { return b.p * b.p * b.q; }),
                 [](const ParamMap& P, const CheckContext& ctx) {
                   return Outcome(contiguous_c1_residual(get_n<8>(P, "t"), bases_of(P), ctx.spec));
                 }});
    C.push_back({"integrals.contiguous_eq2", 5, 1e-7, false, 1, "balancing p^2; unit circle, all shifted sets admissible",
                 c1_like([](const BasePair& b) { return b.p * b.p; }),
                 [](const ParamMap& P, const CheckContext& ctx) {
                   return Outcome(eq2_residual(get_n<8>(P, "t"), bases_of(P), ctx.spec));
                 }});
    C.push_back({"integrals.key_cont", 5, 1e-7, false, 1, "unit circle with |t5|, |t7| < |q|",
                 [](Sampler& S, const CheckContext& ctx) {
                   return draw(S, [&](Sampler& R) {
                     const BasePair& b = ctx.bases;
                     Params8 t{};
                     cplx pr = 1.0;
                     for (int i : {0, 1, 2, 3, 5}) pr *= (t[i] = R.polar(0.35, 0.7));
                     for (int i : {4, 6}) pr *= (t[i] = R.polar(0.1, 0.2));
                     t[7] = b.pq() * b.pq() / pr;
                     need(std::abs(t[7]) <= 1.0 - ctx.spec.margin, "pole margin |t8| <= 1 - delta");
                     ParamMap P;
                     put_bases(P, b);
                     put_n(P, "t", t);
                     return P;
                   });
                 },
                 [](const ParamMap& P, const CheckContext& ctx) {
                   return Outcome(key_cont_residual(get_n<8>(P, "t"), bases_of(P), ctx.spec));
                 }});
    auto eh_sample = [](Sampler& S, const CheckContext& ctx) { return eh_scenario(S, ctx); };
    C.push_back({"integrals.eh", 5, 1e-7, false, 1, "unit circle with |c| < |q|", eh_sample,
                 [](const ParamMap& P, const CheckContext& ctx) {
                   return Outcome(eh_residual(eh_t(P), bases_of(P), ctx.spec));
                 }});
    C.push_back({"integrals.eheq_operator_form", 5, 1e-7, false, 1, "unit circle with |c| < |q|", eh_sample,
                 [](const ParamMap& P, const CheckContext& ctx) {
                   return Outcome(eheq_residual(get_n<6>(P, "s"), get(P, "c"), get(P, "x"), bases_of(P), ctx.spec));
                 }});
    C.push_back({"integrals.eh_consistency", 0, 1e-12, false, 1, "", eh_sample,
                 [](const ParamMap& P, const CheckContext&) {
                   return Outcome(eh_consistency_residual(get_n<6>(P, "s"), get(P, "c"), get(P, "x"), bases_of(P)));
                 }});
    C.push_back({"integrals.op_ident", 5, 1e-12, false, 1, "", eh_sample,
                 [](const ParamMap& P, const CheckContext&) {
                   Params8 t = eh_t(P);
                   cplx a = get(P, "t3p"), c = get(P, "t3pp");
                   return Outcome(op_ident_residual(t, a, t[2] * t[3] / a, c, t[2] * t[3] / c, bases_of(P)));
                 }});
    C.push_back({"integrals.key_eheq", 5, 1e-7, false, 1, "unit circle with |c| < |q|", eh_sample,
                 [](const ParamMap& P, const CheckContext& ctx) {
                   Params8 t = eh_t(P);
                   cplx a = get(P, "t3p");
                   return Outcome(key_eheq_residual(t, a, t[2] * t[3] / a, bases_of(P), ctx.spec));
                 }});
    C.push_back({"integrals.key_eheq_independence", 5, 1e-7, false, 1, "unit circle with |c| < |q|", eh_sample,
                 [](const ParamMap& P, const CheckContext& ctx) {
                   return Outcome(key_eheq_independence(eh_t(P), get(P, "t3p"), get(P, "t3pp"), bases_of(P), ctx.spec));
                 }});
    C.push_back({"integrals.epsilon_roundtrip", 0, 1e-13, false, 1, "", eh_sample,
                 [](const ParamMap& P, const CheckContext&) {
                   auto s = get_n<6>(P, "s");
                   auto back = EpsilonParams::from_t(s, get(P, "c"), bases_of(P)).to_t();
                   double m = 0.0;
                   for (int i = 0; i < 6; ++i) m = std::max(m, rel_diff(back[i], s[i]));
                   return Outcome(m);
                 }});
    C.push_back({"integrals.dx_adjoint", 0, 1e-7, false, 1, "test functions chi = psi = 1", eh_sample,
                 [](const ParamMap& P, const CheckContext& ctx) {
                   auto E = EpsilonParams::from_t(get_n<6>(P, "s"), get(P, "c"), bases_of(P));
                   Fn one = [](cplx) { return cplx(1.0); };
                   return Outcome(dx_adjoint_residual(E, one, one, ctx.spec));
                 }});
    C.push_back({"integrals.dx_zero_mode", 0, 1e-7, false, 1, "unit circle with |c| < |q|", eh_sample,
                 [](const ParamMap& P, const CheckContext& ctx) {
                   auto E = EpsilonParams::from_t(get_n<6>(P, "s"), get(P, "c"), bases_of(P));
                   return Outcome(dx_psi_residual(E, get(P, "x"), ctx.spec));
                 }});
    C.push_back({"integrals.eheq_biorthogonality", 0, 1e-6, true, 1,
                 "beta = 1; no unit-circle configuration makes both chi and psi pole-free",
                 [](Sampler& S, const CheckContext& ctx) {
                   ParamMap P = eh_scenario(S, ctx);
                   ParamMap Q = eh_scenario(S, ctx);
                   for (int i = 1; i <= 6; ++i) P["s'" + std::to_string(i)] = Q.at("s" + std::to_string(i));
                   return P;
                 },
                 [](const ParamMap& P, const CheckContext& ctx) {
                   BasePair b = bases_of(P);
                   auto E = EpsilonParams::from_t(get_n<6>(P, "s"), get(P, "c"), b);
                   auto Ep = EpsilonParams::from_t(get_n<6>(P, "s'"), get(P, "c"), b);
                   auto v = eheq_bio_value(E, Ep, ctx.spec, ctx.spec);
                   return Outcome(Residual(std::abs(v.value) / v.scale, v.nodes_used, true));
                 }});

    // ---- biorthogonality, pointwise ----
    auto bio_sample = [](Sampler& S, const CheckContext& ctx) { return bio_point_scenario(S, ctx); };
    auto bio = [bio_sample](const std::string& id, int crit, double tol, std::function<double(const BioPoint&)> f) {
      return Check{id, crit, tol, false, 1, "", bio_sample,
                   [f](const ParamMap& P, const CheckContext&) { return Outcome(f(bio_point(P))); }};
    };
    C.push_back(bio("bio.f_eq", 6, 1e-10, [](const BioPoint& x) {
      return f_eq_residual(x.z, x.w, x.a, x.b, x.cd.sqrt_cd(), x.bs);
    }));
    C.push_back(bio("bio.gevp2", 6, 1e-10, [](const BioPoint& x) { return gevp2_residual(x.z, x.w, x.a, x.b, x.cd, x.bs); }));
    C.push_back(bio("bio.gevp", 6, 1e-10, [](const BioPoint& x) {
      return gevp_residual(x.z, x.w, x.a, x.b, x.cd, x.cdp, x.bs);
    }));
    C.push_back(bio("bio.gevp_permuted", 6, 1e-11, [](const BioPoint& x) {
      return gevp_residual(x.z, x.w, x.a, x.b, x.cd, x.cdp, x.bs, true);
    }));
    C.push_back(bio("bio.lambda_ratio", 0, 1e-12, [](const BioPoint& x) {
      return lambda_ratio_residual(x.w, x.cd, x.cdp, x.bs);
    }));
    C.push_back(bio("bio.ccr", 6, 1e-10, [](const BioPoint& x) {
      cplx rho = x.a * x.b * x.c * x.d;
      Fn f = [&](cplx y) { return f_basis(y, x.w, x.bs.q * x.a, x.bs.q * x.b, rho, x.bs); };
      return ccr_residual(x.a, x.b, x.c, x.d, x.cdp.c(), x.cdp.d(), f, x.z, x.bs);
    }));
    C.push_back(bio("bio.gen_act", 6, 1e-10, [](const BioPoint& x) {
      return std::max(gen_act_residual(x.a, x.b, x.c, x.d, x.e, x.h, x.z, x.w, x.bs),
                      gen_act_residual(x.a, x.b, x.c, x.d, x.h, x.e, x.z, x.w, x.bs));
    }));
    C.push_back(bio("bio.discrete_basis", 6, 1e-10, [](const BioPoint& x) {
      double m = 0.0;
      for (int N = 0; N <= 3; ++N)
        for (int k = 0; k <= N; ++k) m = std::max(m, dis_bas_residual(x.z, x.a, x.b, N, k, x.bs));
      return m;
    }));
    C.push_back({"bio.theta_lemma", 0, 1e-10, false, 1, "",
                 [](Sampler& S, const CheckContext& ctx) {
                   ParamMap P;
                   put_bases(P, ctx.bases);
                   for (int i = 1; i <= 3; ++i) P["A" + std::to_string(i)] = S.polar(0.6, 1.3);
                   for (int i = 1; i <= 4; ++i) P["B" + std::to_string(i)] = S.polar(0.6, 1.3);
                   P["z"] = S.polar(0.9, 1.1);
                   return P;
                 },
                 [](const ParamMap& P, const CheckContext&) {
                   std::vector<cplx> A, B;
                   for (int i = 1; i <= 3; ++i) A.push_back(get(P, "A" + std::to_string(i)));
                   for (int i = 1; i <= 4; ++i) B.push_back(get(P, "B" + std::to_string(i)));
                   B.push_back(1.0 / (product(A) * product(B)));
                   return Outcome(theta_lemma_residual(A, B, get(P, "z"), bases_of(P).nome_p()));
                 }});
    C.push_back({"bio.weight_positivity", 0, 1e-14, false, 1, "real bases and p = conj(q), 100 circle nodes",
                 [](Sampler&, const CheckContext& ctx) {
                   ParamMap P;
                   put_bases(P, ctx.bases);
                   P["p_conj"] = std::polar(0.3, 0.4);
                   return P;
                 },
                 [](const ParamMap& P, const CheckContext&) {
                   cplx pc = get(P, "p_conj");
                   double m = 0.0;
                   for (const BasePair& b : {bases_of(P), BasePair(pc, std::conj(pc))}) {
                     for (int k = 0; k < 100; ++k) {
                       cplx z = std::polar(1.0, 2.0 * pi * (k + 0.5) / 100.0), w = gamma_weight(z, b);
                       double s = std::abs(w);
                       if (s == 0.0) continue;
                       m = std::max({m, std::abs(w.imag()) / s, std::max(0.0, -w.real()) / s});
                     }
                   }
                   return Outcome(m);
                 }});
    C.push_back(bio("bio.double_conjugation", 0, 1e-15, [](const BioPoint& x) {
      DOp D = DOp::standard(x.a, x.b, x.c, x.d, x.bs), D2 = D.star().star();
      return std::max({rel_diff(D2.a, D.a), rel_diff(D2.b, D.b), rel_diff(D2.c, D.c), rel_diff(D2.d, D.d)});
    }));

    // ---- biorthogonality, integrals ----
    auto phases = [](std::initializer_list<std::pair<const char*, double>> fixed,
                     std::initializer_list<std::pair<const char*, double>> unit) {
      std::vector<std::pair<std::string, double>> F(fixed.begin(), fixed.end()), U(unit.begin(), unit.end());
      return [F, U](Sampler& S, const CheckContext& ctx) {
        ParamMap P;
        put_bases(P, ctx.bases);
        for (const auto& [k, v] : F) P[k] = v;
        for (const auto& [k, r] : U) P[k] = r * S.phase();
        return P;
      };
    };
    C.push_back({"bio.overlap", 6, 1e-7, false, 1, "",
                 phases({{"a", 0.8}, {"b", 0.7}, {"c", 0.5}, {"d", 0.4}, {"rho", 0.3}}, {{"v", 1.05}, {"w", 0.97}}),
                 [](const ParamMap& P, const CheckContext& ctx) {
                   return Outcome(overlap_v_residual(get(P, "a"), get(P, "b"), get(P, "c"), get(P, "d"), get(P, "rho"),
                                                     get(P, "v"), get(P, "w"), bases_of(P), ctx.spec));
                 }});
    C.push_back({"bio.key_relation", 6, 1e-6, false, 1, "outer rule from 64 nodes, rtol 1e-9",
                 phases({{"c", 0.7}, {"d", 0.6}, {"a", 0.5}, {"b", 0.4}, {"rho", 0.35}}, {{"x", 1.0}, {"xi", 1.0}}),
                 [](const ParamMap& P, const CheckContext& ctx) {
                   return Outcome(key_relation_residual(get(P, "c"), get(P, "d"), get(P, "a"), get(P, "b"), get(P, "x"),
                                                        get(P, "xi"), get(P, "rho"), bases_of(P),
                                                        key_relation_outer(ctx.spec), ctx.spec));
                 }});
    C.push_back({"bio.compact_key_relation", 0, 1e-6, false, 1,
                 "the key-relation configuration in compact variables; V continued through E7 images",
                 phases({{"c", 0.7}, {"d", 0.6}, {"a", 0.5}, {"b", 0.4}, {"rho", 0.35}}, {{"x", 1.0}, {"xi", 1.0}}),
                 [](const ParamMap& P, const CheckContext& ctx) {
                   BasePair bs = bases_of(P);
                   cplx a = get(P, "a"), b = get(P, "b"), c = get(P, "c"), d = get(P, "d"), rho = get(P, "rho");
                   cplx s = std::sqrt(bs.pq() / rho);
                   cplx al = s * std::sqrt(c * d), be = std::sqrt(bs.pq() / (c * d));
                   cplx ga = s * std::sqrt(a * b), de = std::sqrt(bs.pq() / (a * b));
                   return Outcome(compact_key_relation_residual(al, be, ga, de, std::sqrt(c / d), get(P, "x"),
                                                                std::sqrt(a / b), get(P, "xi"), bs,
                                                                key_relation_outer(ctx.spec), ctx.spec));
                 }});
    C.push_back({"bio.r_kernel_forms", 0, 1e-7, false, 1, "needs ab < pq for the E7 form",
                 phases({{"a", 0.6}, {"b", 0.5}, {"c", 0.15}, {"d", 0.15}, {"rho", 0.1}}, {{"x", 1.0}, {"w", 1.0}}),
                 [](const ParamMap& P, const CheckContext& ctx) {
                   return Outcome(r_forms_residual(get(P, "a"), get(P, "b"), get(P, "c"), get(P, "d"), get(P, "x"),
                                                   get(P, "w"), get(P, "rho"), bases_of(P), ctx.spec));
                 }});
    C.push_back({"bio.phi_overlap", 0, 1e-7, false, 1, "",
                 phases({{"c", 0.7}, {"d", 0.6}, {"e", 0.12}, {"f", 0.15}, {"s", 0.5}}, {{"x", 1.0}, {"z", 1.0}}),
                 [](const ParamMap& P, const CheckContext& ctx) {
                   return Outcome(prel_residual(get(P, "c"), get(P, "d"), get(P, "e"), get(P, "f"), get(P, "x"),
                                                get(P, "z"), get(P, "s"), bases_of(P), ctx.spec));
                 }});
    C.push_back({"bio.gevp_dual", 0, 1e-7, false, 1, "independent rho for g and f; a common rho is never admissible",
                 [](Sampler& S, const CheckContext& ctx) {
                   ParamMap P;
                   put_bases(P, ctx.bases);
                   P["a"] = std::polar(0.3, 0.2);
                   P["b"] = std::polar(0.35, -0.4);
                   P["c"] = std::polar(0.8, 0.3);
                   P["d"] = std::polar(0.7, -0.2);
                   P["rho_g"] = std::polar(0.01, 0.3);
                   P["rho_f"] = std::polar(0.3, -0.2);
                   P["v"] = 1.05 * S.phase();
                   P["w"] = 0.97 * S.phase();
                   return P;
                 },
                 [](const ParamMap& P, const CheckContext& ctx) {
                   return Outcome(gevp_dual_residual(get(P, "a"), get(P, "b"), get(P, "c"), get(P, "d"), get(P, "rho_g"),
                                                     get(P, "rho_f"), get(P, "v"), get(P, "w"), bases_of(P), ctx.spec));
                 }});
    auto feq_add = [](cplx w1, cplx w2, cplx w3) {
      return [w1, w2, w3](Sampler& S, const CheckContext&) {
        ParamMap P{{"w1", w1}, {"w2", w2}, {"w3", w3}};
        for (const char* k : {"u", "v", "alpha", "beta", "gamma", "delta"}) P[k] = S.box(0.0, 0.25, -0.05, 0.05);
        return P;
      };
    };
    auto feq_add_run = [omega_of](const ParamMap& P, const CheckContext&) {
      return Outcome(f_eq_add_residual(get(P, "u"), get(P, "v"), get(P, "alpha"), get(P, "beta"), get(P, "gamma"),
                                       get(P, "delta"), omega_of(P)));
    };
    C.push_back({"bio.f_eq_modular", 0, 1e-10, false, 1, "", feq_add(cplx(2.0, 0.5), 1.0, I), feq_add_run});
    C.push_back({"bio.f_eq_modular_unit_q", 0, 1e-10, false, 1, "", feq_add(1.0, std::sqrt(2.0), I), feq_add_run});
    C.push_back({"bio.reproducing", 6, 1e-5, true, 1,
                 "R(a,b,c,d) standard form, R(c,d,e,f) E7 form; ab > rho > cd > pq > ef",
                 phases({{"a", 0.8}, {"b", 0.75}, {"rho", 0.4}, {"c", 0.6}, {"d", 0.5}, {"e", 0.12}, {"f", 0.15}},
                        {{"x", 1.0}, {"z", 1.0}}),
                 [](const ParamMap& P, const CheckContext& ctx) {
                   QuadratureSpec outer = ctx.spec, inner = ctx.spec;
                   outer.n0 = 64;
                   outer.rtol = 1e-8;
                   inner.rtol = 1e-8;
                   return Outcome(reproducing_residual(get(P, "a"), get(P, "b"), get(P, "c"), get(P, "d"), get(P, "e"),
                                                       get(P, "f"), get(P, "x"), get(P, "z"), get(P, "rho"),
                                                       bases_of(P), outer, inner));
                 }});

    // ---- Sklyanin algebra, canonical tau, eta, g ----
    auto sk_sample = [](Sampler& S, const CheckContext&) { return sklyanin_scenario(S); };
    auto sk = [sk_sample](const std::string& id, int crit, double tol,
                          std::function<double(const SklyaninParams&, const Fn&, cplx)> f) {
      return Check{id, crit, tol, false, 1, "", sk_sample, [f](const ParamMap& P, const CheckContext&) {
                     auto S = sklyanin_of(P);
                     cplx u = get(P, "u");
                     return over_test_functions(P, [&](const Fn& fn) { return f(S, fn, u); });
                   }};
    };
    C.push_back(sk("sklyanin.relations", 7, 1e-10, [](const SklyaninParams& S, const Fn& f, cplx u) {
      return sklyanin_relations_residual(S, f, u);
    }));
    C.push_back({"sklyanin.structure_constants", 0, 1e-12, false, 1, "", sk_sample,
                 [](const ParamMap& P, const CheckContext&) {
                   return Outcome(structure_constant_residual(sklyanin_of(P)));
                 }});
    C.push_back(sk("sklyanin.casimirs", 7, 1e-9, [](const SklyaninParams& S, const Fn& f, cplx u) {
      auto c = casimir_residuals(S, f, u);
      return std::max(c.k0, c.k2);
    }));
    C.push_back({"sklyanin.casimir_jacobi", 0, 1e-12, false, 1, "", sk_sample,
                 [](const ParamMap& P, const CheckContext&) {
                   auto S = sklyanin_of(P);
                   double m = 0.0;
                   for (const auto& b : casimir_jacobi_vectors(S, get(P, "u")))
                     m = std::max(m, jacobi_identity_residual(b, S.tau));
                   return Outcome(m);
                 }});
    auto delta_sample = [](Sampler& S, const CheckContext&) {
      ParamMap P = sklyanin_scenario(S);
      for (const char* k : {"A1", "A2", "A3"}) P[k] = S.box(-0.3, 0.3, -0.1, 0.1);
      return P;
    };
    auto quad_of = [](const ParamMap& P) {
      Quad A{get(P, "A1"), get(P, "A2"), get(P, "A3"), 0.0};
      A[3] = -4.0 * get(P, "g") - A[0] - A[1] - A[2];
      return A;
    };
    C.push_back({"sklyanin.delta_equivalence", 7, 1e-10, false, 1, "", delta_sample,
                 [quad_of](const ParamMap& P, const CheckContext&) {
                   auto S = sklyanin_of(P);
                   Quad A = quad_of(P);
                   cplx u = get(P, "u");
                   return over_test_functions(P, [&](const Fn& f) {
                     return std::max(delta_equivalence_residual(A, S, f, u), delta_bridge_residual(A, S, f, u));
                   });
                 }});
    C.push_back(sk("sklyanin.generators_as_delta", 7, 1e-10, [](const SklyaninParams& S, const Fn& f, cplx u) {
      double m = 0.0;
      for (int a = 0; a < 4; ++a) m = std::max(m, s_as_delta_residual(a, S, f, u));
      return m;
    }));
    C.push_back(sk("sklyanin.cross_tau_eta", 7, 1e-9, [](const SklyaninParams& S, const Fn& f, cplx u) {
      double m = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) m = std::max(m, cross_commutation_residual(a, b, S, Double::tau_eta_swap, f, u));
      return m;
    }));
    C.push_back({"sklyanin.cross_omega", 7, 1e-9, false, 1, "", sk_sample,
                 [](const ParamMap& P, const CheckContext&) {
                   auto S0 = sklyanin_of(P);
                   cplx u = get(P, "u");
                   Outcome o;
                   for (cplx eta : {std::polar(0.5, 0.3), cplx(0.35, 0.1)}) {
                     SklyaninParams S(eta, S0.tau, S0.g);
                     o.worst(over_test_functions(P, [&](const Fn& f) {
                       double m = 0.0;
                       for (int a = 0; a < 4; ++a)
                         for (int b = 0; b < 4; ++b)
                           m = std::max(m, cross_commutation_residual(a, b, S, Double::omega_swap, f, u));
                       return m;
                     }));
                   }
                   return o;
                 }});
    C.push_back(sk("sklyanin.uq_sl2", 7, 1e-10, [](const SklyaninParams& S, const Fn& f, cplx u) {
      return uq_relations_residual(S, f, u).max();
    }));

    // ---- Bethe ansatz, Heun limit, van Diejen reduction, zero modes ----
    auto bethe_sample = [](Sampler& S, const CheckContext&) { return bethe_scenario(S); };
    for (int N : {0, 1, 2})
      C.push_back({"heun.bethe_n" + std::to_string(N), N < 2 ? 8 : 0, 1e-8, false, 1,
                   "residual is the larger of devp at 10 points and the energy spread over l", bethe_sample,
                   [N](const ParamMap& P, const CheckContext&) { return bethe_outcome(N, P); }});
    C.push_back({"heun.trivial_points", 8, 1e-12, false, 1, "", bethe_sample,
                 [](const ParamMap& P, const CheckContext&) {
                   cplx tau = get(P, "tau");
                   double m = 0.0;
                   for (cplx u : {cplx(0.0), cplx(0.5), tau / 2.0, (1.0 + tau) / 2.0})
                     m = std::max(m, std::abs(theta1(2.0 * u, tau)));
                   return Outcome(m);
                 }});
    C.push_back({"heun.limit_order", 8, 0.3, false, 1, "residual is max |order - 3| over three test functions",
                 [](Sampler&, const CheckContext&) {
                   return ParamMap{{"tau", cplx(0.0, 0.5)}, {"u", cplx(0.13, 0.04)}, {"alpha0", 0.3},
                                   {"alpha1", 0.45},        {"alpha2", 0.2},         {"alpha3", 0.65}};
                 },
                 [](const ParamMap& P, const CheckContext&) {
                   cplx tau = get(P, "tau"), u = get(P, "u");
                   Alpha4 al{get_real(P, "alpha0"), get_real(P, "alpha1"), get_real(P, "alpha2"), get_real(P, "alpha3")};
                   const std::vector<double> etas{0.02, 0.01, 0.005, 0.0025};
                   std::vector<std::vector<cplx>> prods{{0.3, -0.3}, {0.2, -0.2, 0.1}};
                   Outcome o;
                   std::string orders;
                   auto add = [&](const Fn& f, const Fn& f2) {
                     auto h = heun_limit_order(f, f2, u, al, tau, etas);
                     o.residual = std::max(o.residual, std::abs(h.order - 3.0));
                     char buf[32];
                     std::snprintf(buf, sizeof buf, "%s%.3f", orders.empty() ? "" : " ", h.order);
                     orders += buf;
                   };
                   for (const auto& s : prods)
                     add([&](cplx x) { return jet_product(s, x, tau).f; }, [&](cplx x) { return jet_product(s, x, tau).d2; });
                   const cplx k = 2.0 * pi * I;
                   add([k](cplx x) { return std::exp(k * x) + 2.0; }, [k](cplx x) { return k * k * std::exp(k * x); });
                   return o.note("orders: " + orders);
                 }});
    C.push_back({"heun.van_diejen_reduction", 8, 1e-10, false, 1, "",
                 [](Sampler& S, const CheckContext& ctx) {
                   ParamMap P;
                   put_bases(P, ctx.bases);
                   P["e5"] = std::polar(0.8, 1.3);
                   P["e6"] = std::polar(0.6, 0.4);
                   P["e7"] = std::polar(0.7, -0.9);
                   P["x1"] = S.polar(0.85, 0.95);
                   P["x2"] = S.polar(1.05, 1.15);
                   return P;
                 },
                 [](const ParamMap& P, const CheckContext&) {
                   auto vd = VanDiejenConfig::reduced(get(P, "e5"), get(P, "e6"), get(P, "e7"), bases_of(P));
                   double m = 0.0;
                   for (cplx x : {get(P, "x1"), get(P, "x2")}) {
                     m = std::max(m, vd_reduction_residual(vd, [](cplx y) { return y + 1.0 / y; }, x));
                     m = std::max(m, vd_reduction_residual(vd, [](cplx) { return cplx(1.0); }, x));
                   }
                   return Outcome(m);
                 }});
    auto zm_sample = [](Sampler& S, const CheckContext& ctx) { return zero_mode_scenario(S, ctx); };
    C.push_back({"heun.zero_mode_psi2", 8, 1e-9, false, 1, "", zm_sample,
                 [](const ParamMap& P, const CheckContext& ctx) {
                   auto z = zero_mode_of(P);
                   Outcome o;
                   for (cplx x : {get(P, "x1"), get(P, "x2")}) o.worst(zero_mode_residual(ZeroMode::psi2, x, z, ctx.spec));
                   return o;
                 }});
    C.push_back({"heun.zero_mode_inversion", 0, 1e-9, false, 1, "psi2 residual at x and 1/x", zm_sample,
                 [](const ParamMap& P, const CheckContext& ctx) {
                   auto z = zero_mode_of(P);
                   Outcome o;
                   for (cplx x : {get(P, "x1"), get(P, "x2")})
                     for (cplx y : {x, 1.0 / x}) o.worst(zero_mode_residual(ZeroMode::psi2, y, z, ctx.spec));
                   return o;
                 }});
    C.push_back({"heun.zero_mode_psi1", 8, 1e-6, false, 1, "V evaluated through its second E7 image", zm_sample,
                 [](const ParamMap& P, const CheckContext& ctx) {
                   auto z = zero_mode_of(P);
                   Outcome o;
                   for (cplx x : {get(P, "x1"), get(P, "x2")}) o.worst(zero_mode_residual(ZeroMode::psi1, x, z, ctx.spec));
                   return o;
                 }});
    C.push_back({"heun.zero_mode_ellipticity", 8, 1e-6, false, 1, "psi1/psi2 compared at x and q^2 x, |x| = 1/|q|",
                 zm_sample,
                 [](const ParamMap& P, const CheckContext& ctx) {
                   auto z = zero_mode_of(P);
                   cplx x = get(P, "x1") / z.bs.q;
                   return Outcome(ellipticity_residual(x, z, ctx.spec));
                 }});

    return C;
  }();
  return catalog;
}

inline const Check* find_check(const std::string& id) {
  for (const auto& c : check_catalog())
    if (c.id == id) return &c;
  return nullptr;
}

}  // namespace ellhyp
