#ifndef PROTSUB_TEST_ORACLES_HPP
#define PROTSUB_TEST_ORACLES_HPP

// Generators and independent oracles shared by the unit tests and the
// acceptance binary.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "protsub/protsub.hpp"

namespace testutil {

using namespace protsub;

inline constexpr double kPi = std::numbers::pi;

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, CounterRng& rng) {
  ComplexMatrix m(rows, cols);
  for (auto& x : m.data()) x = rng.complex_normal();
  return m;
}

inline ComplexMatrix random_hermitian(std::size_t n, CounterRng& rng) {
  const ComplexMatrix g = random_matrix(n, n, rng);
  return 0.5 * (g + adjoint(g));
}

/// Random density matrix G G† / tr.
inline ComplexMatrix random_density(std::size_t n, CounterRng& rng) {
  const ComplexMatrix g = random_matrix(n, n, rng);
  ComplexMatrix rho = g * adjoint(g);
  return (1.0 / trace(rho).real()) * rho;
}

/// W diag(f(x)) W† for Hermitian T = W diag(x) W†; independent of the
/// library's eigensolver only through the reconstruction check callers add.
inline ComplexMatrix hermitian_function(const ComplexMatrix& t, const std::function<double(double)>& f) {
  const auto eig = eig_hermitian(t);
  ComplexVector d;
  for (const auto& v : eig.values) d.push_back(f(v.real()));
  return eig.vectors * ComplexMatrix::diagonal(d) * adjoint(eig.vectors);
}

/// Two-Kraus channel A_1 = V_1 √T, A_2 = V_2 √(1−T) with 0 < T < 1.
inline KrausChannel random_rank2_channel(std::size_t n, CounterRng& rng) {
  const ComplexMatrix w = random_unitary(n, rng);
  ComplexVector t;
  for (std::size_t i = 0; i < n; ++i) t.push_back(0.05 + 0.9 * rng.uniform());
  ComplexVector s1, s2;
  for (auto x : t) {
    s1.push_back(std::sqrt(x.real()));
    s2.push_back(std::sqrt(1.0 - x.real()));
  }
  const ComplexMatrix v1 = random_unitary(n, rng);
  const ComplexMatrix v2 = random_unitary(n, rng);
  const ComplexMatrix a1 = v1 * w * ComplexMatrix::diagonal(s1) * adjoint(w);
  const ComplexMatrix a2 = v2 * w * ComplexMatrix::diagonal(s2) * adjoint(w);
  return KrausChannel::make({a1, a2}, 1e-10);
}

/// Random channel with m Kraus operators: blocks of a Haar isometry.
inline KrausChannel random_channel(std::size_t n, std::size_t m, CounterRng& rng) {
  const ComplexMatrix u = random_unitary(n * m, rng);
  std::vector<ComplexMatrix> ops;
  for (std::size_t i = 0; i < m; ++i) {
    ComplexMatrix a(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) a(r, c) = u(i * n + r, c);
    ops.push_back(a);
  }
  return KrausChannel::make(std::move(ops), 1e-10);
}

/// Number of eigenvalues of Hermitian T below x: negative pivots of the
/// LDL† factorization of T − x·1 (Sylvester inertia), no eigensolver involved.
inline std::size_t count_below(const ComplexMatrix& t, double x) {
  const std::size_t n = t.rows();
  ComplexMatrix a = t - x * ComplexMatrix::identity(n);
  std::size_t neg = 0;
  for (std::size_t k = 0; k < n; ++k) {
    double piv = a(k, k).real();
    if (piv == 0.0) piv = -1e-300;
    if (piv < 0.0) ++neg;
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex f = a(i, k) / piv;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * std::conj(a(j, k));
    }
  }
  return neg;
}

/// Ascending spectrum of Hermitian T from inertia bisection.
inline std::vector<double> oracle_spectrum(const ComplexMatrix& t) {
  const std::size_t n = t.rows();
  double r = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += std::abs(t(i, j));
    r = std::max(r, row);
  }
  std::vector<double> out;
  for (std::size_t k = 0; k < n; ++k) {
    double lo = -r - 1.0, hi = r + 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, r); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (count_below(t, mid) > k) hi = mid;
      else lo = mid;
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

/// The biased permutation example: S from its five parameters.
inline RealMatrix example_weights(double x = 0.4, double a = 0.05, double b = 0.1, double c = 0.04, double d = 0.08) {
  return {{a, b, x - b, x - a}, {c, d, x - d, x - c}, {1 - a - c, 1 - b - d, 1 - 2 * x + b + d, 1 - 2 * x + a + c}};
}

/// Cycles (1234), (12)(34), (1432) as 0-based image arrays.
inline std::vector<Permutation> example_perms() { return {{1, 2, 3, 0}, {1, 0, 3, 2}, {3, 0, 1, 2}}; }

inline KrausChannel example_biased_channel() { return biased_permutation_channel(example_weights(), example_perms()); }

/// Compression C†XC and its distance from a multiple of the identity.
inline double scalar_residual(const ComplexMatrix& c, const ComplexMatrix& x) {
  const ComplexMatrix m = adjoint(c) * x * c;
  const Complex lambda = trace(m) / static_cast<double>(m.rows());
  return max_norm(m - lambda * ComplexMatrix::identity(m.rows()));
}

inline ComplexMatrix diag_unitary(std::initializer_list<double> phases) {
  ComplexVector d;
  for (double p : phases) d.push_back(std::polar(1.0, p));
  return ComplexMatrix::diagonal(d);
}

}  // namespace testutil

#endif  // PROTSUB_TEST_ORACLES_HPP
