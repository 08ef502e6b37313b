#pragma once
// Shared scalar type, error classes, residual helpers and the node worker pool.

#include <algorithm>
#include <array>
#include <cstdio>
#include <limits>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <exception>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace ellhyp {

using cplx = std::complex<double>;
using Fn = std::function<cplx(cplx)>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx I{0.0, 1.0};

// Error taxonomy. Everything derives from a std exception so callers may
// catch broadly.
struct invalid_argument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct pole_error : std::domain_error {
  using std::domain_error::domain_error;
};
struct regime_error : std::domain_error {
  using std::domain_error::domain_error;
};
struct inadmissible_error : std::domain_error {
  using std::domain_error::domain_error;
};
struct degenerate_error : std::domain_error {
  using std::domain_error::domain_error;
};
struct solver_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct sampling_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct integrand_failure : std::runtime_error {
  cplx node;
  integrand_failure(const std::string& what, cplx z)
      : std::runtime_error(what), node(z) {}
};

inline bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline void require_finite(cplx z, const char* who) {
  if (!finite(z)) throw invalid_argument(std::string(who) + ": non-finite argument");
}

inline std::string to_string(cplx z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.17g,%.17g)", z.real(), z.imag());
  return buf;
}

// Residual of a check: scalar value plus quadrature bookkeeping. Converts to
// double so pointwise checks can use it as a plain number.
struct Residual {
  double value = 0.0;
  int nodes_used = 0;
  bool converged = true;

  Residual() = default;
  Residual(double v) : value(v) {}
  Residual(double v, int n, bool c) : value(v), nodes_used(n), converged(c) {}
  operator double() const { return value; }

  Residual& merge(const Residual& o) {
    nodes_used = std::max(nodes_used, o.nodes_used);
    converged = converged && o.converged;
    return *this;
  }
};

// |a - b| / max(|a|, |b|)
inline double rel_diff(cplx a, cplx b) {
  double s = std::max(std::abs(a), std::abs(b));
  if (s == 0.0) return 0.0;
  return std::abs(a - b) / s;
}

// |sum of terms| / largest single term
inline double term_residual(const std::vector<cplx>& terms) {
  cplx s = 0.0;
  double m = 0.0;
  for (auto t : terms) {
    s += t;
    m = std::max(m, std::abs(t));
  }
  if (m == 0.0) return 0.0;
  return std::abs(s) / m;
}

inline bool rel_close(cplx a, cplx b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

// ---- deterministic summation and the worker pool ----------------------------

template <class T>
T pairwise_sum(const T* v, std::size_t n) {
  if (n <= 8) {
    T s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

template <class T>
T pairwise_sum(const std::vector<T>& v) { return pairwise_sum(v.data(), v.size()); }

// ELLHYP_THREADS: 0 or unset means hardware concurrency.
inline unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("ELLHYP_THREADS");
  if (!env || !*env) return hw;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (end == env || v < 0) return hw;
  if (v == 0) return hw;
  return static_cast<unsigned>(v);
}

namespace detail {
inline thread_local bool in_worker = false;
}

// Runs body(i) for i in [0, n). Nested calls from a worker run serially, so
// only the outermost quadrature fans out. Exceptions are rethrown in chunk
// order, which keeps error reporting deterministic.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  unsigned T = detail::in_worker ? 1u : worker_count();
  T = static_cast<unsigned>(std::min<std::size_t>(T, n / 16));
  if (T <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errs(T);
  auto run = [&](unsigned c) {
    bool prev = detail::in_worker;
    detail::in_worker = true;
    try {
      std::size_t lo = n * c / T, hi = n * (c + 1) / T;
      for (std::size_t i = lo; i < hi; ++i) body(i);
    } catch (...) {
      errs[c] = std::current_exception();
    }
    detail::in_worker = prev;
  };
  std::vector<std::thread> pool;
  pool.reserve(T - 1);
  for (unsigned c = 1; c < T; ++c) pool.emplace_back(run, c);
  run(0);
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

}  // namespace ellhyp
