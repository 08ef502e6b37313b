#pragma once
// Trapezoidal rule on the unit circle with node doubling.

#include "gamma.hpp"

namespace ellhyp {

struct QuadratureSpec {
  int n0 = 256;
  int n_max = 16384;
  double rtol = 1e-11;
  double margin = 0.05;

  void validate() const {
    auto pow2 = [](int n) { return n > 0 && (n & (n - 1)) == 0; };
    if (n0 < 64 || !pow2(n0)) throw invalid_argument("QuadratureSpec: n0 must be a power of two >= 64");
    if (n_max < n0 || n_max > (1 << 20) || !pow2(n_max))
      throw invalid_argument("QuadratureSpec: n_max must be a power of two in [n0, 2^20]");
    if (!(rtol >= 1e-14 && rtol <= 1e-2)) throw invalid_argument("QuadratureSpec: rtol outside [1e-14, 1e-2]");
    if (!(margin > 0.0 && margin < 0.5)) throw invalid_argument("QuadratureSpec: margin outside (0, 0.5)");
  }
};

struct QuadratureResult {
  cplx value = 0.0;
  double error_estimate = 0.0;
  int nodes_used = 0;
  bool converged = false;
  double abs_mean = 0.0;  // mean of |f| over the final node set

  operator Residual() const { return Residual(error_estimate, nodes_used, converged); }
};

// Successive averages share nodes; integrals that cancel to zero are declared
// converged once the change sits at rounding level relative to mean |f|.
inline constexpr double quadrature_floor = 1e-15;

namespace detail {

struct Level {
  cplx sum;      // sum of f over the new nodes of this level
  double asum;   // sum of |f| over the same nodes
};

inline Level eval_nodes(const Fn& f, int N, int start, int step) {
  const int count = (N - start + step - 1) / step;
  std::vector<cplx> vals(count);
  std::vector<double> mags(count);
  parallel_for(static_cast<std::size_t>(count), [&](std::size_t i) {
    int k = start + static_cast<int>(i) * step;
    cplx z = std::polar(1.0, 2.0 * pi * k / N);
    vals[i] = f(z);
    mags[i] = std::abs(vals[i]);
  });
  for (int i = 0; i < count; ++i)
    if (!finite(vals[i])) {
      int k = start + i * step;
      cplx z = std::polar(1.0, 2.0 * pi * k / N);
      throw integrand_failure("circle_mean: non-finite integrand at node " + to_string(z), z);
    }
  return {pairwise_sum(vals), pairwise_sum(mags)};
}

}  // namespace detail

// Mean of f over e^{2 pi i k/N}, doubling N until the relative change is below
// rtol or n_max is reached.
inline QuadratureResult circle_mean(const Fn& f, const QuadratureSpec& spec = {}) {
  spec.validate();
  int N = spec.n0;
  auto lv = detail::eval_nodes(f, N, 0, 1);
  cplx sum = lv.sum;
  double asum = lv.asum;
  QuadratureResult r;
  r.value = sum / double(N);
  r.nodes_used = N;
  r.abs_mean = asum / N;
  r.error_estimate = std::numeric_limits<double>::infinity();
  while (2 * N <= spec.n_max) {
    auto nl = detail::eval_nodes(f, 2 * N, 1, 2);
    sum = sum + nl.sum;
    asum += nl.asum;
    N *= 2;
    cplx v = sum / double(N);
    double diff = std::abs(v - r.value);
    r.error_estimate = diff / std::max(std::abs(v), 1e-300);
    r.value = v;
    r.nodes_used = N;
    r.abs_mean = asum / N;
    if (r.error_estimate < spec.rtol || diff <= quadrature_floor * asum / N) {
      r.converged = true;
      return r;
    }
  }
  return r;
}

// Every doubling level from n0 to n_max without early exit; used to measure
// the convergence rate.
inline std::vector<QuadratureResult> circle_mean_history(const Fn& f, const QuadratureSpec& spec = {}) {
  spec.validate();
  std::vector<QuadratureResult> out;
  int N = spec.n0;
  auto lv = detail::eval_nodes(f, N, 0, 1);
  cplx sum = lv.sum;
  QuadratureResult r;
  r.value = sum / double(N);
  r.nodes_used = N;
  r.error_estimate = std::numeric_limits<double>::infinity();
  out.push_back(r);
  while (2 * N <= spec.n_max) {
    sum = sum + detail::eval_nodes(f, 2 * N, 1, 2).sum;
    N *= 2;
    cplx v = sum / double(N);
    QuadratureResult s;
    s.value = v;
    s.nodes_used = N;
    s.error_estimate = std::abs(v - out.back().value) / std::max(std::abs(v), 1e-300);
    s.converged = s.error_estimate < spec.rtol;
    out.push_back(s);
  }
  return out;
}

inline cplx kappa_factor(const BasePair& b) {
  return qpochhammer(b.p, b.nome_p()) * qpochhammer(b.q, b.nome_q()) / (4.0 * pi * I);
}

// kappa * int_T f dz/z = (p;p)(q;q)/2 * circle_mean(f)
inline cplx kappa_mean_factor(const BasePair& b) {
  return qpochhammer(b.p, b.nome_p()) * qpochhammer(b.q, b.nome_q()) / 2.0;
}

inline bool pole_margin_check(const std::vector<cplx>& t, double delta) {
  for (auto x : t)
    if (!(std::abs(x) <= 1.0 - delta)) return false;
  return true;
}

template <std::size_t N>
bool pole_margin_check(const std::array<cplx, N>& t, double delta) {
  return pole_margin_check(std::vector<cplx>(t.begin(), t.end()), delta);
}

}  // namespace ellhyp
