#ifndef PROTSUB_CHANNELS_HPP
#define PROTSUB_CHANNELS_HPP

// Channels in Kraus form. Heisenberg picture: Φ(X) = Σ A_i† X A_i, unital.
// Schrödinger picture: Φ*(ρ) = Σ A_i ρ A_i†, trace preserving.
//
// The Stinespring isometry V : H → M ⊗ H is stacked ancilla-major, i.e.
// rows [i·n, (i+1)·n) of V hold A_i. Every ancilla-side formula below uses
// that ordering: X acting on the system is 1_M ⊗ X, Y acting on the ancilla
// is Y ⊗ 1_H.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "protsub/linalg.hpp"

namespace protsub {

class KrausChannel {
 public:
  /// Validates shapes and Σ A_i†A_i = 1 to `tol`.
  static KrausChannel make(std::vector<ComplexMatrix> ops, double tol = kDefaultTol) {
    if (ops.empty()) throw Error(ErrorKind::ShapeMismatch, "channel needs at least one Kraus operator");
    const std::size_t n = ops.front().rows();
    if (n == 0) throw Error(ErrorKind::ShapeMismatch, "zero-dimensional Kraus operator");
    for (const auto& a : ops) {
      if (a.rows() != n || a.cols() != n) {
        throw Error(ErrorKind::ShapeMismatch, "Kraus operators must all be " + std::to_string(n) +
                                                  "x" + std::to_string(n));
      }
      if (!is_finite(a)) throw Error(ErrorKind::NotFinite, "Kraus operator has NaN/Inf entries");
    }
    KrausChannel ch(std::move(ops), tol);
    const double resid = ch.completeness_residual();
    if (resid > tol) {
      throw Error(ErrorKind::NotTracePreserving,
                  "completeness residual " + std::to_string(resid) + " exceeds tol");
    }
    return ch;
  }

  std::size_t dim() const noexcept { return ops_.front().rows(); }
  std::size_t size() const noexcept { return ops_.size(); }
  double tol() const noexcept { return tol_; }
  const ComplexMatrix& op(std::size_t i) const { return ops_.at(i); }
  std::span<const ComplexMatrix> ops() const noexcept { return ops_; }

  /// ‖Σ A_i†A_i − 1‖_max
  double completeness_residual() const {
    ComplexMatrix sum(dim(), dim());
    for (const auto& a : ops_) sum += adjoint(a) * a;
    return max_norm(sum - ComplexMatrix::identity(dim()));
  }

 private:
  KrausChannel(std::vector<ComplexMatrix> ops, double tol) : ops_(std::move(ops)), tol_(tol) {}

  std::vector<ComplexMatrix> ops_;
  double tol_;
};

inline KrausChannel new_kraus(std::vector<ComplexMatrix> ops, double tol = kDefaultTol) {
  return KrausChannel::make(std::move(ops), tol);
}

/// A channel read together with its ancilla measurement: outcome i ↔ A_i.
struct Instrument {
  KrausChannel channel;
  std::vector<std::string> labels;

  std::size_t outcomes() const noexcept { return channel.size(); }
};

inline Instrument make_instrument(KrausChannel ch, std::vector<std::string> labels = {}) {
  if (labels.empty()) {
    for (std::size_t i = 0; i < ch.size(); ++i) labels.push_back(std::to_string(i));
  }
  if (labels.size() != ch.size()) {
    throw Error(ErrorKind::ShapeMismatch, "need one outcome label per Kraus operator");
  }
  if (std::set<std::string>(labels.begin(), labels.end()).size() != labels.size()) {
    throw Error(ErrorKind::InvalidArgument, "outcome labels must be distinct");
  }
  return Instrument{std::move(ch), std::move(labels)};
}

struct StinespringDilation {
  ComplexMatrix V;  // (m·n) × n
  std::size_t ancilla_dim = 0;
  std::size_t dim = 0;
};

inline void require_square_of(const ComplexMatrix& x, std::size_t n, const char* what) {
  if (x.rows() != n || x.cols() != n) {
    throw Error(ErrorKind::ShapeMismatch, std::string(what) + " must be " + std::to_string(n) +
                                              "x" + std::to_string(n));
  }
}

/// Φ*(ρ) = Σ A_i ρ A_i†
inline ComplexMatrix apply_schrodinger(const KrausChannel& ch, const ComplexMatrix& rho) {
  require_square_of(rho, ch.dim(), "state");
  ComplexMatrix out(ch.dim(), ch.dim());
  for (const auto& a : ch.ops()) out += a * rho * adjoint(a);
  return out;
}

/// Φ(X) = Σ A_i† X A_i
inline ComplexMatrix apply_heisenberg(const KrausChannel& ch, const ComplexMatrix& x) {
  require_square_of(x, ch.dim(), "observable");
  ComplexMatrix out(ch.dim(), ch.dim());
  for (const auto& a : ch.ops()) out += adjoint(a) * x * a;
  return out;
}

inline StinespringDilation stinespring(const KrausChannel& ch) {
  const std::size_t n = ch.dim();
  const std::size_t m = ch.size();
  ComplexMatrix v(m * n, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) v(i * n + r, c) = ch.op(i)(r, c);
  return {std::move(v), m, n};
}

/// V†(X ⊗ 1_M)V evaluated on the dilation itself.
inline ComplexMatrix dilation_heisenberg(const StinespringDilation& d, const ComplexMatrix& x) {
  require_square_of(x, d.dim, "observable");
  return adjoint(d.V) * tensor(ComplexMatrix::identity(d.ancilla_dim), x) * d.V;
}

/// V†(1_H ⊗ Y)V evaluated on the dilation itself.
inline ComplexMatrix dilation_conjugate(const StinespringDilation& d, const ComplexMatrix& y) {
  require_square_of(y, d.ancilla_dim, "ancilla operator");
  return adjoint(d.V) * tensor(y, ComplexMatrix::identity(d.dim)) * d.V;
}

/// Conjugate channel Φ^C(Y) = Σ_ij Y_ij A_i†A_j.
inline ComplexMatrix conjugate_apply(const KrausChannel& ch, const ComplexMatrix& y) {
  require_square_of(y, ch.size(), "ancilla operator");
  ComplexMatrix out(ch.dim(), ch.dim());
  for (std::size_t i = 0; i < ch.size(); ++i)
    for (std::size_t j = 0; j < ch.size(); ++j) {
      if (y(i, j) == Complex{}) continue;
      out += y(i, j) * (adjoint(ch.op(i)) * ch.op(j));
    }
  return out;
}

/// Another Kraus form of the same map: B_j = Σ_i u_ij A_i for unitary u.
inline KrausChannel rebase_kraus(const KrausChannel& ch, const ComplexMatrix& u) {
  require_square_of(u, ch.size(), "rebasing unitary");
  const double defect = isometry_residual(u);
  if (defect > ch.tol()) throw Error(ErrorKind::NotUnitary, "rebasing defect " + std::to_string(defect));
  std::vector<ComplexMatrix> ops;
  for (std::size_t j = 0; j < ch.size(); ++j) {
    ComplexMatrix b(ch.dim(), ch.dim());
    for (std::size_t i = 0; i < ch.size(); ++i) b += u(i, j) * ch.op(i);
    ops.push_back(std::move(b));
  }
  // Rounding can push the completeness residual a hair beyond the original.
  return KrausChannel::make(std::move(ops), std::max(ch.tol(), 10.0 * ch.completeness_residual()));
}

inline std::vector<ComplexMatrix> povm_elements(const KrausChannel& ch) {
  std::vector<ComplexMatrix> out;
  for (const auto& a : ch.ops()) out.push_back(adjoint(a) * a);
  return out;
}

inline KrausChannel unitary_channel(const ComplexMatrix& u, double tol = kDefaultTol) {
  const double defect = isometry_residual(u);
  if (!u.is_square() || defect > tol) throw Error(ErrorKind::NotUnitary, "unitary channel");
  return KrausChannel::make({u}, tol);
}

/// Random external field: Kraus operators √q_i·U_i.
inline KrausChannel ref_channel(std::span<const ComplexMatrix> unitaries,
                                std::span<const double> weights, double tol = kDefaultTol) {
  if (unitaries.size() != weights.size() || unitaries.empty()) {
    throw Error(ErrorKind::BadWeights, "need one positive weight per unitary");
  }
  double total = 0.0;
  for (double q : weights) {
    if (!(q > 0.0)) throw Error(ErrorKind::BadWeights, "weights must be positive");
    total += q;
  }
  if (std::abs(total - 1.0) > tol) throw Error(ErrorKind::BadWeights, "weights must sum to 1");
  std::vector<ComplexMatrix> ops;
  for (std::size_t i = 0; i < unitaries.size(); ++i) {
    if (!unitaries[i].is_square() || isometry_residual(unitaries[i]) > tol) {
      throw Error(ErrorKind::NotUnitary, "unitary " + std::to_string(i));
    }
    ops.push_back(std::sqrt(weights[i]) * unitaries[i]);
  }
  return KrausChannel::make(std::move(ops), tol);
}

// ---------------------------------------------------------------------------
// Biased permutation channels

/// One-line form: perm[i] is the image of i (0-based).
using Permutation = std::vector<std::size_t>;
using RealMatrix = std::vector<std::vector<double>>;

inline void validate_permutation(const Permutation& perm, std::size_t n) {
  if (perm.size() != n) throw Error(ErrorKind::BadPermutation, "permutation length");
  std::vector<bool> seen(n, false);
  for (auto p : perm) {
    if (p >= n || seen[p]) throw Error(ErrorKind::BadPermutation, "not a bijection");
    seen[p] = true;
  }
}

/// 0/1 matrix with P[i][perm[i]] = 1, so P e_{perm[i]} = e_i.
inline ComplexMatrix permutation_matrix(const Permutation& perm) {
  validate_permutation(perm, perm.size());
  ComplexMatrix p(perm.size(), perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) p(i, perm[i]) = 1.0;
  return p;
}

/// A_i = P_i·√D_i with (D_i)_mm = S[i][m]; S must be column stochastic.
inline KrausChannel biased_permutation_channel(const RealMatrix& s,
                                               const std::vector<Permutation>& perms,
                                               double tol = kDefaultTol) {
  if (s.empty() || s.front().empty()) throw Error(ErrorKind::NotStochastic, "empty S");
  const std::size_t r = s.size();
  const std::size_t n = s.front().size();
  if (perms.size() != r) throw Error(ErrorKind::BadPermutation, "need one permutation per row of S");
  for (const auto& row : s) {
    if (row.size() != n) throw Error(ErrorKind::NotStochastic, "ragged S");
    for (double x : row) {
      if (!std::isfinite(x) || x < -tol) throw Error(ErrorKind::NotStochastic, "negative entry in S");
    }
  }
  for (std::size_t m = 0; m < n; ++m) {
    double col = 0.0;
    for (std::size_t i = 0; i < r; ++i) col += s[i][m];
    if (std::abs(col - 1.0) > tol) {
      throw Error(ErrorKind::NotStochastic, "column " + std::to_string(m) + " sums to " +
                                                std::to_string(col));
    }
  }
  std::vector<ComplexMatrix> ops;
  for (std::size_t i = 0; i < r; ++i) {
    validate_permutation(perms[i], n);
    ComplexMatrix sqrt_d(n, n);
    for (std::size_t m = 0; m < n; ++m) sqrt_d(m, m) = std::sqrt(std::max(0.0, s[i][m]));
    ops.push_back(permutation_matrix(perms[i]) * sqrt_d);
  }
  return KrausChannel::make(std::move(ops), tol);
}

/// Local product channel Φ_A ⊗ Φ_B with Kraus operators A_i ⊗ B_j (i-major).
inline KrausChannel product_channel(const KrausChannel& a, const KrausChannel& b) {
  std::vector<ComplexMatrix> ops;
  for (const auto& x : a.ops())
    for (const auto& y : b.ops()) ops.push_back(tensor(x, y));
  return KrausChannel::make(std::move(ops), std::max(a.tol(), b.tol()));
}

}  // namespace protsub

#endif  // PROTSUB_CHANNELS_HPP
