#ifndef PROTSUB_RANDOM_HPP
#define PROTSUB_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

#include "protsub/linalg.hpp"

namespace protsub {

/// Counter-based generator: output k of stream s under seed x is a pure
/// function of (x, s, k). `split` derives an independent stream, so per-trial
/// generators can be built in any order and produce the same draws.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ULL))) {}

  CounterRng split(std::uint64_t stream) const { return CounterRng(key_, stream + 1); }

  std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (both halves used).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

  Complex complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Haar-random unit vector in C^n (normalized complex Gaussian).
inline ComplexVector random_unit_vector(std::size_t n, CounterRng& rng) {
  ComplexVector v(n);
  double nv = 0.0;
  while (nv < 1e-300) {
    for (auto& x : v) x = rng.complex_normal();
    nv = norm(v);
  }
  for (auto& x : v) x /= nv;
  return v;
}

/// Haar-random unitary: Gram-Schmidt of a complex Ginibre matrix. The
/// implied R factor has a positive diagonal, which is what makes it Haar.
inline ComplexMatrix random_unitary(std::size_t n, CounterRng& rng) {
  ComplexMatrix g(n, n);
  for (auto& x : g.data()) x = rng.complex_normal();
  return orthonormalize_columns(g);
}

}  // namespace protsub

#endif  // PROTSUB_RANDOM_HPP
