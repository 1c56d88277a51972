#ifndef PROTSUB_NUMRANGE_HPP
#define PROTSUB_NUMRANGE_HPP

// Higher-rank numerical ranges Λ_k(T) = {λ : C†TC = λ·1_k for some isometry C}
// and constructive compressions for Hermitian, unitary and commuting normal
// operators.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "protsub/geometry.hpp"
#include "protsub/isometry.hpp"
#include "protsub/linalg.hpp"

namespace protsub {

struct RealInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty = false;

  bool contains(double x, double tol = kDefaultTol) const {
    return !empty && x >= lo - tol && x <= hi + tol;
  }
};

/// Convex outer bound on Λ_k of a normal operator. `vertices` is a
/// counterclockwise convex polygon, a segment (2 points) or a point.
struct PlanarRegion {
  std::vector<Complex> vertices;
  bool empty = true;
  /// Points additionally certified by an explicit compression (inner points).
  std::vector<Complex> certified_inner;
  /// Spectrum the bound was built from, for plotting.
  std::vector<Complex> spectrum;

  bool contains(Complex z, double tol = 1e-9) const { return !empty && geom::contains(vertices, z, tol); }
};

struct CompressionCertificate {
  ComplexMatrix C;  // n × k, orthonormal columns
  Complex lambda;
  double residual = 0.0;  // ‖C†TC − λ·1‖_max
  /// Mixing weights used per code vector (sin²θ_m), when the construction has them.
  std::vector<double> weights;
};

/// Which eigenvalue pairs the Hermitian construction superposes.
/// Mirror: x_m with x_{n+1−m}. Shifted: x_m with x_{m+n−k} (the n=4, k=2
/// instance being {x_1, x_3}, {x_2, x_4}); needs 2k ≤ n.
enum class PairingScheme { Mirror, Shifted };

inline double compression_residual(const ComplexMatrix& c, const ComplexMatrix& t, Complex lambda) {
  const ComplexMatrix m = adjoint(c) * t * c;
  return max_norm(m - lambda * ComplexMatrix::identity(c.cols()));
}

/// Λ_k(T) = [x_k, x_{n+1−k}] for Hermitian T with ascending spectrum x.
inline RealInterval lambda_k_hermitian(const ComplexMatrix& t, std::size_t k, double tol = kDefaultTol) {
  const auto eig = eig_hermitian(t, tol);
  const std::size_t n = eig.values.size();
  if (k < 1 || k > n) throw Error(ErrorKind::InvalidArgument, "need 1 <= k <= n");
  RealInterval out{eig.values[k - 1].real(), eig.values[n - k].real(), false};
  if (out.lo > out.hi + tol) {
    out.empty = true;
  } else if (out.lo > out.hi) {
    out.lo = out.hi = 0.5 * (out.lo + out.hi);
  }
  return out;
}

inline CompressionCertificate construct_hermitian_compression(const ComplexMatrix& t, std::size_t k,
                                                              double lambda,
                                                              PairingScheme scheme = PairingScheme::Mirror,
                                                              double tol = kDefaultTol) {
  const auto eig = eig_hermitian(t, tol);
  const std::size_t n = eig.values.size();
  if (k < 1 || k > n) throw Error(ErrorKind::InvalidArgument, "need 1 <= k <= n");
  if (scheme == PairingScheme::Mirror && 2 * k > n + 1) {
    throw Error(ErrorKind::LambdaOutOfRange, "Λ_k is empty for 2k > n+1");
  }
  if (scheme == PairingScheme::Shifted && 2 * k > n) {
    throw Error(ErrorKind::InvalidArgument, "shifted pairing needs 2k <= n");
  }
  const std::vector<double> x = eig.real_values();
  if (lambda < x[k - 1] - tol || lambda > x[n - k] + tol) {
    throw Error(ErrorKind::LambdaOutOfRange, std::to_string(lambda) + " outside [" +
                                                 std::to_string(x[k - 1]) + ", " +
                                                 std::to_string(x[n - k]) + "]");
  }
  CompressionCertificate cert;
  cert.C = ComplexMatrix(n, k);
  cert.lambda = lambda;
  for (std::size_t m = 0; m < k; ++m) {
    const std::size_t partner = scheme == PairingScheme::Mirror ? n - 1 - m : m + n - k;
    const ComplexVector lo = eig.vectors.col(m);
    ComplexVector psi = lo;
    double s2 = 0.0;
    if (partner != m) {
      const double gap = x[partner] - x[m];
      if (gap <= tol) {
        if (std::abs(lambda - x[m]) > 10.0 * tol) {
          throw Error(ErrorKind::DegeneratePairMismatch, "degenerate pair differs from lambda");
        }
      } else {
        s2 = std::clamp((lambda - x[m]) / gap, 0.0, 1.0);
        const ComplexVector hi = eig.vectors.col(partner);
        const double c = std::sqrt(1.0 - s2);
        const double s = std::sqrt(s2);
        for (std::size_t i = 0; i < n; ++i) psi[i] = c * lo[i] + s * hi[i];
      }
    } else if (std::abs(lambda - x[m]) > 10.0 * tol) {
      throw Error(ErrorKind::DegeneratePairMismatch, "unpaired middle eigenvalue differs from lambda");
    }
    cert.weights.push_back(s2);
    cert.C.set_col(m, psi);
  }
  cert.residual = compression_residual(cert.C, t, lambda);
  if (cert.residual > tol * std::max(1.0, max_norm(t))) {
    throw Error(ErrorKind::NoConvergence, "compression residual " + std::to_string(cert.residual));
  }
  return cert;
}

namespace detail {

inline constexpr double kDegeneratePhaseGap = 1e-8;

// Eigen-clusters of a unitary spectrum: indices whose eigenvalues lie within
// `gap` of each other (single linkage on consecutive phase-sorted values,
// with wraparound at 2π).
inline std::vector<std::vector<std::size_t>> unitary_clusters(const std::vector<Complex>& z,
                                                              double gap = kDegeneratePhaseGap) {
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (i == 0 || std::abs(z[i] - z[i - 1]) > gap) clusters.emplace_back();
    clusters.back().push_back(i);
  }
  if (clusters.size() > 1 && std::abs(z.front() - z.back()) <= gap) {
    auto tail = clusters.back();
    clusters.pop_back();
    clusters.front().insert(clusters.front().begin(), tail.begin(), tail.end());
  }
  return clusters;
}

}  // namespace detail

/// Rank-2 compression of a 4×4 unitary. Non-degenerate spectrum: λ is the
/// crossing point of the chords z1z3 and z2z4 (phase order). If an eigenvalue
/// is at least doubly degenerate, its eigenspace is returned with λ equal to
/// that eigenvalue.
inline CompressionCertificate lambda2_unitary_chord(const ComplexMatrix& u, double tol = kDefaultTol) {
  if (u.rows() != 4 || u.cols() != 4) throw Error(ErrorKind::ShapeMismatch, "chord construction needs a 4x4 unitary");
  const auto eig = eig_unitary(u, tol);
  const auto& z = eig.values;
  for (const auto& cluster : detail::unitary_clusters(z)) {
    if (cluster.size() < 2) continue;
    const std::size_t pick[] = {cluster[0], cluster[1]};
    CompressionCertificate cert;
    cert.C = select_columns(eig.vectors, pick);
    cert.lambda = 0.5 * (z[pick[0]] + z[pick[1]]);
    cert.residual = compression_residual(cert.C, u, cert.lambda);
    if (cert.residual > tol) {
      throw Error(ErrorKind::DegenerateSpectrum, "near-degenerate pair is not an exact eigenspace");
    }
    return cert;
  }

  // Solve (1−a)z_p + a z_q = (1−b)z_r + b z_s for real a, b.
  auto solve = [&](std::size_t p, std::size_t q, std::size_t r, std::size_t s)
      -> std::optional<std::pair<double, double>> {
    const Complex d1 = z[q] - z[p];
    const Complex d2 = z[s] - z[r];
    const Complex rhs = z[r] - z[p];
    const double det = -d1.real() * d2.imag() + d2.real() * d1.imag();
    if (std::abs(det) < tol) return std::nullopt;
    const double a = (-rhs.real() * d2.imag() + d2.real() * rhs.imag()) / det;
    const double b = (d1.real() * rhs.imag() - d1.imag() * rhs.real()) / det;
    if (a < -tol || a > 1.0 + tol || b < -tol || b > 1.0 + tol) return std::nullopt;
    return std::pair{std::clamp(a, 0.0, 1.0), std::clamp(b, 0.0, 1.0)};
  };
  std::array<std::size_t, 4> idx{0, 2, 1, 3};
  auto ab = solve(0, 2, 1, 3);
  if (!ab) {
    idx = {0, 3, 1, 2};
    ab = solve(0, 3, 1, 2);
  }
  if (!ab) throw Error(ErrorKind::ParallelChords, "chords do not intersect");
  const auto [a, b] = *ab;
  CompressionCertificate cert;
  cert.lambda = (1.0 - a) * z[idx[0]] + a * z[idx[1]];
  cert.weights = {a, b};
  ComplexVector psi1(4), psi2(4);
  for (std::size_t i = 0; i < 4; ++i) {
    psi1[i] = std::sqrt(1.0 - a) * eig.vectors(i, idx[0]) + std::sqrt(a) * eig.vectors(i, idx[1]);
    psi2[i] = std::sqrt(1.0 - b) * eig.vectors(i, idx[2]) + std::sqrt(b) * eig.vectors(i, idx[3]);
  }
  const ComplexVector cols[] = {psi1, psi2};
  cert.C = ComplexMatrix::from_columns(cols);
  cert.residual = compression_residual(cert.C, u, cert.lambda);
  if (cert.residual > tol) {
    throw Error(ErrorKind::NoConvergence, "chord residual " + std::to_string(cert.residual));
  }
  return cert;
}

namespace detail {

// Calls f(indices) for every s-subset of {0..n-1} in lexicographic order.
inline void for_each_subset(std::size_t n, std::size_t s,
                            const std::function<void(const std::vector<std::size_t>&)>& f) {
  if (s > n) return;
  std::vector<std::size_t> idx(s);
  for (std::size_t i = 0; i < s; ++i) idx[i] = i;
  while (true) {
    f(idx);
    std::size_t i = s;
    while (i > 0 && idx[i - 1] == n - s + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < s; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline double binomial(std::size_t n, std::size_t s) {
  double r = 1.0;
  for (std::size_t i = 1; i <= s; ++i) r = r * static_cast<double>(n - s + i) / static_cast<double>(i);
  return r;
}

}  // namespace detail

/// Outer bound on Λ_k(U): intersection of the convex hulls of every
/// (n+1−k)-point sub-multiset of the spectrum.
inline PlanarRegion lambda_k_unitary_outer(const ComplexMatrix& u, std::size_t k, double tol = kDefaultTol) {
  const auto eig = eig_unitary(u, tol);
  const std::size_t n = eig.values.size();
  if (k < 1 || k > n) throw Error(ErrorKind::InvalidArgument, "need 1 <= k <= n");
  const std::size_t s = n + 1 - k;
  if (detail::binomial(n, s) > 2e5) throw Error(ErrorKind::InvalidArgument, "too many spectral subsets");

  // Snap numerically repeated eigenvalues onto one representative so that
  // hull degeneracies are exact.
  std::vector<Complex> z = eig.values;
  const auto clusters = detail::unitary_clusters(z, 1e-9);
  for (const auto& cluster : clusters) {
    Complex mean{};
    for (auto i : cluster) mean += z[i];
    mean /= std::abs(mean) > 0 ? std::abs(mean) : 1.0;
    for (auto i : cluster) z[i] = mean;
  }

  geom::Polygon region = geom::convex_hull(z);
  std::set<std::vector<std::size_t>> seen;  // subsets keyed by cluster labels
  std::vector<std::size_t> label(n);
  for (std::size_t c = 0; c < clusters.size(); ++c)
    for (auto i : clusters[c]) label[i] = c;
  detail::for_each_subset(n, s, [&](const std::vector<std::size_t>& idx) {
    if (region.empty()) return;
    std::vector<std::size_t> key;
    for (auto i : idx) key.push_back(label[i]);
    std::sort(key.begin(), key.end());
    if (!seen.insert(key).second) return;
    geom::Polygon pts;
    for (auto i : idx) pts.push_back(z[i]);
    region = geom::intersect(region, geom::convex_hull(pts));
  });

  PlanarRegion out;
  out.vertices = region;
  out.empty = region.empty();
  out.spectrum = z;
  for (const auto& cluster : clusters) {
    if (cluster.size() >= k) out.certified_inner.push_back(z[cluster.front()]);
  }
  if (n == 4 && k == 2) {
    try {
      const auto cert = lambda2_unitary_chord(u, tol);
      if (out.contains(cert.lambda)) out.certified_inner.push_back(cert.lambda);
    } catch (const Error&) {
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Joint compression of a commuting normal family

struct JointCompression {
  ComplexMatrix C;                             // n × k
  std::vector<Complex> lambdas;                // one per family member
  std::vector<std::vector<std::size_t>> groups;  // eigen-index groups (joint eigenbasis)
  std::vector<std::vector<double>> weights;    // mixing weights per group
  ComplexMatrix basis;                         // joint eigenbasis used for the groups
  double residual = 0.0;
};

namespace detail {

// Phase-I simplex (Bland's rule): some x ≥ 0 with A x = b, or nullopt.
inline std::optional<std::vector<double>> feasible_point(const std::vector<std::vector<double>>& a,
                                                         const std::vector<double>& b) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a.front().size();
  const std::size_t width = cols + rows + 1;
  std::vector<std::vector<double>> t(rows, std::vector<double>(width, 0.0));
  std::vector<std::size_t> basis(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const double sign = b[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < cols; ++j) t[i][j] = sign * a[i][j];
    t[i][cols + i] = 1.0;
    t[i][width - 1] = sign * b[i];
    basis[i] = cols + i;
  }
  std::vector<double> z(width, 0.0);  // reduced costs, last entry = −objective
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) z[j] -= t[i][j];
    z[width - 1] -= t[i][width - 1];
  }
  constexpr double eps = 1e-12;
  for (int iter = 0; iter < 20000; ++iter) {
    std::size_t enter = width;
    for (std::size_t j = 0; j + 1 < width; ++j) {
      if (z[j] < -eps) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;
    std::size_t leave = rows;
    double best = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      if (t[i][enter] > eps) {
        const double ratio = t[i][width - 1] / t[i][enter];
        if (leave == rows || ratio < best - eps ||
            (std::abs(ratio - best) <= eps && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
    }
    if (leave == rows) return std::nullopt;
    const double piv = t[leave][enter];
    for (auto& v : t[leave]) v /= piv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == leave || t[i][enter] == 0.0) continue;
      const double f = t[i][enter];
      for (std::size_t j = 0; j < width; ++j) t[i][j] -= f * t[leave][j];
    }
    const double f = z[enter];
    for (std::size_t j = 0; j < width; ++j) z[j] -= f * t[leave][j];
    basis[leave] = enter;
  }
  if (-z[width - 1] > 1e-9) return std::nullopt;
  std::vector<double> x(cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    if (basis[i] < cols) x[basis[i]] = std::max(0.0, t[i][width - 1]);
  }
  return x;
}

using Grouping = std::vector<std::vector<std::size_t>>;

// Every set of k disjoint s-element groups drawn from n indices, canonical
// (groups sorted internally and by first element), in lexicographic order.
// `f` returns true to stop.
inline bool for_each_grouping(std::size_t n, std::size_t k, std::size_t s,
                              const std::function<bool(const Grouping&)>& f) {
  Grouping current;
  std::vector<bool> used(n, false);
  std::function<bool(std::size_t)> rec = [&](std::size_t min_first) -> bool {
    if (current.size() == k) return f(current);
    for (std::size_t first = min_first; first < n; ++first) {
      if (used[first]) continue;
      std::vector<std::size_t> free;
      for (std::size_t j = first + 1; j < n; ++j)
        if (!used[j]) free.push_back(j);
      if (free.size() + 1 < s) continue;
      bool stop = false;
      for_each_subset(free.size(), s - 1, [&](const std::vector<std::size_t>& pick) {
        if (stop) return;
        std::vector<std::size_t> group{first};
        for (auto p : pick) group.push_back(free[p]);
        for (auto g : group) used[g] = true;
        current.push_back(group);
        stop = rec(first + 1);
        current.pop_back();
        for (auto g : group) used[g] = false;
      });
      if (stop) return true;
    }
    return false;
  };
  return rec(0);
}

}  // namespace detail

/// Searches for an isometry C (n × k) with C†T_mC = λ_m·1 for all m, for a
/// commuting family of normal matrices. Candidate constructions, in order:
/// k-fold joint degeneracy, mirror pairs, all pairings, all triples (the last
/// two for n ≤ 12). Within each step the lexicographically first success wins.
inline std::optional<JointCompression> find_joint_compression(std::span<const ComplexMatrix> family,
                                                              std::size_t k, double tol = kDefaultTol) {
  if (family.empty()) throw Error(ErrorKind::InvalidArgument, "empty family");
  const std::size_t n = family.front().rows();
  double scale = 1.0;
  for (const auto& t : family) {
    if (!t.is_square() || t.rows() != n) throw Error(ErrorKind::ShapeMismatch, "family shapes differ");
    scale = std::max(scale, max_norm(t));
  }
  if (k < 1 || k > n) throw Error(ErrorKind::InvalidArgument, "need 1 <= k <= n");
  for (std::size_t a = 0; a < family.size(); ++a) {
    if (normality_residual(family[a]) > tol * scale * scale) {
      throw Error(ErrorKind::NotNormal, "family member " + std::to_string(a) + " is not normal");
    }
    for (std::size_t b = a + 1; b < family.size(); ++b) {
      if (max_norm(commutator(family[a], family[b])) > tol * scale * scale) {
        throw Error(ErrorKind::NotCommuting, "members " + std::to_string(a) + " and " +
                                                 std::to_string(b) + " do not commute");
      }
    }
  }

  bool all_diagonal = true;
  for (const auto& t : family)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && std::abs(t(i, j)) > tol) all_diagonal = false;

  ComplexMatrix basis = all_diagonal ? ComplexMatrix::identity(n) : joint_eigenbasis(family);
  const std::size_t fam = family.size();
  auto joint_values = [&](const ComplexMatrix& v) {
    std::vector<std::vector<Complex>> mu(fam, std::vector<Complex>(n));
    for (std::size_t m = 0; m < fam; ++m) {
      const ComplexMatrix d = adjoint(v) * family[m] * v;
      for (std::size_t j = 0; j < n; ++j) mu[m][j] = d(j, j);
    }
    return mu;
  };
  if (!all_diagonal) {
    // Order the joint eigenbasis lexicographically by the spectra so that the
    // mirror pairing of the first member matches the Hermitian construction.
    const auto mu = joint_values(basis);
    auto key = [&](std::size_t j) {
      std::vector<std::int64_t> kv;
      for (std::size_t m = 0; m < fam; ++m) {
        kv.push_back(std::llround(mu[m][j].real() / 1e-9));
        kv.push_back(std::llround(mu[m][j].imag() / 1e-9));
      }
      return kv;
    };
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
    basis = select_columns(basis, order);
  }
  const auto mu = joint_values(basis);

  auto build = [&](const detail::Grouping& groups,
                   const std::vector<std::vector<double>>& weights) -> std::optional<JointCompression> {
    JointCompression out;
    out.C = ComplexMatrix(n, groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
      ComplexVector psi(n);
      for (std::size_t idx = 0; idx < groups[g].size(); ++idx) {
        const double w = std::sqrt(std::max(0.0, weights[g][idx]));
        for (std::size_t i = 0; i < n; ++i) psi[i] += w * basis(i, groups[g][idx]);
      }
      const double nv = norm(psi);
      if (nv < 1e-12) return std::nullopt;
      for (auto& x : psi) x /= nv;
      out.C.set_col(g, psi);
    }
    out.residual = 0.0;
    for (const auto& t : family) {
      const ComplexMatrix m = adjoint(out.C) * t * out.C;
      const Complex lambda = trace(m) / static_cast<double>(groups.size());
      out.lambdas.push_back(lambda);
      out.residual = std::max(out.residual, max_norm(m - lambda * ComplexMatrix::identity(groups.size())));
    }
    if (out.residual > tol * scale) return std::nullopt;
    out.groups = groups;
    out.weights = weights;
    out.basis = basis;
    return out;
  };

  auto solve_grouping = [&](const detail::Grouping& groups) -> std::optional<JointCompression> {
    const std::size_t s = groups.front().size();
    const std::size_t vars = groups.size() * s;
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      std::vector<double> row(vars, 0.0);
      for (std::size_t j = 0; j < s; ++j) row[g * s + j] = 1.0;
      a.push_back(row);
      b.push_back(1.0);
    }
    for (std::size_t g = 1; g < groups.size(); ++g) {
      for (std::size_t m = 0; m < fam; ++m) {
        for (int part = 0; part < 2; ++part) {
          std::vector<double> row(vars, 0.0);
          bool nonzero = false;
          for (std::size_t j = 0; j < s; ++j) {
            const Complex hi = mu[m][groups[g][j]];
            const Complex lo = mu[m][groups[0][j]];
            row[g * s + j] = part == 0 ? hi.real() : hi.imag();
            row[j] -= part == 0 ? lo.real() : lo.imag();
            nonzero = nonzero || row[g * s + j] != 0.0 || row[j] != 0.0;
          }
          if (nonzero) {
            a.push_back(row);
            b.push_back(0.0);
          }
        }
      }
    }
    const auto x = detail::feasible_point(a, b);
    if (!x) return std::nullopt;
    std::vector<std::vector<double>> weights(groups.size(), std::vector<double>(s));
    for (std::size_t g = 0; g < groups.size(); ++g)
      for (std::size_t j = 0; j < s; ++j) weights[g][j] = (*x)[g * s + j];
    return build(groups, weights);
  };

  // 1. k-fold joint degeneracy: any k joint eigenvectors sharing all values.
  for (std::size_t i = 0; i < n; ++i) {
    detail::Grouping groups;
    for (std::size_t j = i; j < n && groups.size() < k; ++j) {
      bool same = true;
      for (std::size_t m = 0; m < fam; ++m) same = same && std::abs(mu[m][j] - mu[m][i]) <= tol * scale;
      if (same) groups.push_back({j});
    }
    if (groups.size() == k) {
      if (auto r = build(groups, std::vector<std::vector<double>>(k, {1.0}))) return r;
    }
  }
  // 2. Mirror pairs {j, n−1−j}.
  if (2 * k <= n) {
    detail::Grouping groups;
    for (std::size_t j = 0; j < k; ++j) groups.push_back({j, n - 1 - j});
    if (auto r = solve_grouping(groups)) return r;
  }
  if (n > 12) return std::nullopt;
  // 3–4. Exhaustive pairings, then triples.
  for (std::size_t s : {std::size_t{2}, std::size_t{3}}) {
    if (s * k > n) continue;
    std::optional<JointCompression> found;
    detail::for_each_grouping(n, k, s, [&](const detail::Grouping& groups) {
      found = solve_grouping(groups);
      return found.has_value();
    });
    if (found) return found;
  }
  return std::nullopt;
}

inline JointCompression joint_compression_commuting(std::span<const ComplexMatrix> family, std::size_t k,
                                                    double tol = kDefaultTol) {
  auto r = find_joint_compression(family, k, tol);
  if (!r) throw Error(ErrorKind::NotFound, "no joint compression of rank " + std::to_string(k));
  return std::move(*r);
}

}  // namespace protsub

#endif  // PROTSUB_NUMRANGE_HPP
