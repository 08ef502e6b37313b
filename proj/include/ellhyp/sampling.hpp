#pragma once
// Seeded rejection sampling for check scenarios.

#include <cstdint>
#include <random>
#include <string>

#include "core.hpp"

namespace ellhyp {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FNV-1a; stable across platforms, unlike std::hash
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// per-check, per-sample seed
inline std::uint64_t scenario_seed(std::uint64_t base, const std::string& check_id, int index) {
  return splitmix64(base ^ fnv1a(check_id) ^ splitmix64(static_cast<std::uint64_t>(index)));
}

// The uniform variates are built from raw engine output, so draws are identical
// on every standard library.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  cplx phase() { return std::polar(1.0, 2.0 * pi * uniform()); }
  // modulus uniform in [rlo, rhi], phase uniform
  cplx polar(double rlo, double rhi) { return uniform(rlo, rhi) * phase(); }
  cplx box(double re_lo, double re_hi, double im_lo, double im_hi) {
    double x = uniform(re_lo, re_hi);
    return {x, uniform(im_lo, im_hi)};
  }
  // integer in [0, n)
  int index(int n) { return static_cast<int>(uniform() * n); }
  std::uint32_t bits32() { return static_cast<std::uint32_t>(rng_() >> 32); }

 private:
  std::mt19937_64 rng_;
};

// Thrown by a draw attempt whose admissibility predicate failed.
struct rejection {
  std::string predicate;
};

inline void need(bool ok, const std::string& predicate) {
  if (!ok) throw rejection{predicate};
}

inline constexpr int max_rejections = 10000;

// Repeats attempt(S) until it returns without a rejection. Inadmissible images
// reported by the library count as rejections.
template <class F>
auto draw(Sampler& S, F&& attempt) -> decltype(attempt(S)) {
  std::string last;
  for (int k = 0; k < max_rejections; ++k) {
    try {
      return attempt(S);
    } catch (const rejection& r) {
      last = r.predicate;
    } catch (const inadmissible_error& e) {
      last = e.what();
    }
  }
  throw sampling_failure("sampling: " + std::to_string(max_rejections) + " rejections, last predicate: " + last);
}

}  // namespace ellhyp
