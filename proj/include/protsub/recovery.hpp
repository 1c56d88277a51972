#ifndef PROTSUB_RECOVERY_HPP
#define PROTSUB_RECOVERY_HPP

// Decoders for protected codes.
//
// Strong (outcome-blind): Δ(Z) = Σ D_i†ZD_i + tr(ρZ)(1 − Σ D_i†D_i), with
// D_i = C†B_i†/√a_i in the Kraus frame B that diagonalizes α.
// Weak (outcome l observed): Δ_l(Z) = D_l†ZD_l + tr(ρZ)(1 − D_l†D_l), with
// D_l = C†A_l†/√λ_l, or 0 when λ_l vanishes.

#include <cmath>
#include <optional>
#include <vector>

#include "protsub/channels.hpp"
#include "protsub/codes.hpp"
#include "protsub/isometry.hpp"
#include "protsub/linalg.hpp"

namespace protsub {

enum class DecoderMode { Strong, Weak };

constexpr const char* to_string(DecoderMode m) { return m == DecoderMode::Strong ? "strong" : "weak"; }

struct Decoder {
  DecoderMode mode = DecoderMode::Strong;
  std::vector<ComplexMatrix> D;  // k × n each
  std::vector<double> weights;   // a_i (strong) or λ_l (weak)
  ComplexMatrix completion_state;  // k × k density matrix ρ
  std::optional<ComplexMatrix> rebasing;
  std::size_t k = 0;
  std::size_t n = 0;
};

struct DecoderOptions {
  double cutoff = 1e-12;  // eigenvalues of α (or λ_l) at or below this are dropped
  std::optional<ComplexMatrix> completion_state;
  double tol = kDefaultTol;
};

namespace detail {

inline ComplexMatrix completion_state_or_default(const DecoderOptions& opt, std::size_t k) {
  if (!opt.completion_state) return (1.0 / static_cast<double>(k)) * ComplexMatrix::identity(k);
  const ComplexMatrix& rho = *opt.completion_state;
  require_square_of(rho, k, "completion state");
  if (hermiticity_residual(rho) > opt.tol || std::abs(trace(rho) - 1.0) > opt.tol) {
    throw Error(ErrorKind::InvalidArgument, "completion state must be a density matrix");
  }
  const auto eig = eig_hermitian(hermitian_part(rho), 1e-8);
  if (eig.values.front().real() < -opt.tol) {
    throw Error(ErrorKind::InvalidArgument, "completion state must be positive");
  }
  return rho;
}

}  // namespace detail

inline Decoder build_strong_decoder(const KrausChannel& ch, const Isometry& c, const CodeCertificate& cert,
                                    const DecoderOptions& opt = {}) {
  if (!cert.at_least(ProtectionClass::CompletelyDark) || !cert.alpha) {
    throw Error(ErrorKind::NotCompletelyDark, "strong decoding needs a completely dark code");
  }
  if (cert.alpha->rows() != ch.size() || c.n() != ch.dim()) {
    throw Error(ErrorKind::ShapeMismatch, "certificate does not match channel and code");
  }
  const std::size_t k = c.k();
  const auto eig = eig_hermitian(detail::hermitian_part(*cert.alpha), 1e-8);
  if (eig.values.front().real() < -static_cast<double>(k) * opt.tol) {
    throw Error(ErrorKind::AlphaNotPSD, "alpha has eigenvalue " + std::to_string(eig.values.front().real()));
  }
  const ComplexMatrix& u = eig.vectors;
  const KrausChannel rebased = rebase_kraus(ch, u);

  Decoder dec;
  dec.mode = DecoderMode::Strong;
  dec.k = k;
  dec.n = ch.dim();
  dec.rebasing = u;
  dec.completion_state = detail::completion_state_or_default(opt, k);
  ComplexMatrix sum(dec.n, dec.n);
  for (std::size_t i = 0; i < rebased.size(); ++i) {
    const double a = eig.values[i].real();
    if (a <= opt.cutoff) continue;
    ComplexMatrix d = (1.0 / std::sqrt(a)) * (adjoint(c.matrix()) * adjoint(rebased.op(i)));
    sum += adjoint(d) * d;
    dec.D.push_back(std::move(d));
    dec.weights.push_back(a);
  }
  // Σ D_i†D_i projects onto the orthogonal sum of the ranges of B_iC.
  const double proj = max_norm(sum * sum - sum);
  if (proj > 1e-8) throw Error(ErrorKind::NotCompletelyDark, "decoder ranges are not orthogonal");
  return dec;
}

inline Decoder build_weak_decoder(const Instrument& inst, const Isometry& c, const CodeCertificate& cert,
                                  const DecoderOptions& opt = {}) {
  if (!cert.at_least(ProtectionClass::Dark)) throw Error(ErrorKind::NotDark, "weak decoding needs a dark code");
  const KrausChannel& ch = inst.channel;
  if (cert.lambdas.size() != ch.size() || c.n() != ch.dim()) {
    throw Error(ErrorKind::ShapeMismatch, "certificate does not match instrument and code");
  }
  Decoder dec;
  dec.mode = DecoderMode::Weak;
  dec.k = c.k();
  dec.n = ch.dim();
  dec.completion_state = detail::completion_state_or_default(opt, dec.k);
  for (std::size_t l = 0; l < ch.size(); ++l) {
    const double lambda = cert.lambdas[l];
    dec.weights.push_back(lambda);
    if (lambda <= opt.cutoff) {
      dec.D.emplace_back(dec.k, dec.n);
    } else {
      dec.D.push_back((1.0 / std::sqrt(lambda)) * (adjoint(c.matrix()) * adjoint(ch.op(l))));
    }
  }
  return dec;
}

/// Strong Δ(Z); Z is k × k, result n × n.
inline ComplexMatrix apply_decoder(const Decoder& dec, const ComplexMatrix& z) {
  require_square_of(z, dec.k, "code operator");
  ComplexMatrix out(dec.n, dec.n);
  ComplexMatrix sum(dec.n, dec.n);
  for (const auto& d : dec.D) {
    out += adjoint(d) * z * d;
    sum += adjoint(d) * d;
  }
  const Complex rz = trace(dec.completion_state * z);
  return out + rz * (ComplexMatrix::identity(dec.n) - sum);
}

/// Weak Δ_l(Z) for outcome l.
inline ComplexMatrix apply_decoder_block(const Decoder& dec, std::size_t l, const ComplexMatrix& z) {
  require_square_of(z, dec.k, "code operator");
  const ComplexMatrix& d = dec.D.at(l);
  const ComplexMatrix dd = adjoint(d) * d;
  const Complex rz = trace(dec.completion_state * z);
  return adjoint(d) * z * d + rz * (ComplexMatrix::identity(dec.n) - dd);
}

struct RoundTripReport {
  double max_residual = 0.0;
  double unitality_residual = 0.0;  // ‖Δ(1_k) − 1_n‖ (strong) or max_l ‖Δ_l(1_k) − 1_n‖ (weak)
  bool pass = false;
};

inline constexpr double kRoundTripTol = 1e-9;

/// Strong: Γ∘Φ∘Δ(E_pq) = E_pq. Weak: Σ_l C†A_l†Δ_l(E_pq)A_lC = E_pq.
inline RoundTripReport verify_roundtrip(const KrausChannel& ch, const Isometry& c, const Decoder& dec,
                                        double tol = kRoundTripTol) {
  if (dec.k != c.k() || dec.n != c.n() || c.n() != ch.dim()) {
    throw Error(ErrorKind::ShapeMismatch, "decoder does not match channel and code");
  }
  if (dec.mode == DecoderMode::Weak && dec.D.size() != ch.size()) {
    throw Error(ErrorKind::ShapeMismatch, "weak decoder needs one block per outcome");
  }
  const std::size_t k = c.k();
  RoundTripReport rep;
  std::vector<ComplexMatrix> ac;
  for (const auto& a : ch.ops()) ac.push_back(a * c.matrix());
  for (std::size_t p = 0; p < k; ++p) {
    for (std::size_t q = 0; q < k; ++q) {
      const ComplexMatrix z = matrix_unit(k, k, p, q);
      ComplexMatrix out(k, k);
      if (dec.mode == DecoderMode::Strong) {
        const ComplexMatrix x = apply_decoder(dec, z);
        for (const auto& m : ac) out += adjoint(m) * x * m;
      } else {
        for (std::size_t l = 0; l < ch.size(); ++l) out += adjoint(ac[l]) * apply_decoder_block(dec, l, z) * ac[l];
      }
      rep.max_residual = std::max(rep.max_residual, max_norm(out - z));
    }
  }
  const ComplexMatrix one = ComplexMatrix::identity(k);
  const ComplexMatrix one_n = ComplexMatrix::identity(dec.n);
  if (dec.mode == DecoderMode::Strong) {
    rep.unitality_residual = max_norm(apply_decoder(dec, one) - one_n);
  } else {
    for (std::size_t l = 0; l < dec.D.size(); ++l) {
      rep.unitality_residual = std::max(rep.unitality_residual, max_norm(apply_decoder_block(dec, l, one) - one_n));
    }
  }
  rep.pass = rep.max_residual <= tol && rep.unitality_residual <= tol;
  return rep;
}

inline RoundTripReport verify_roundtrip(const Instrument& inst, const Isometry& c, const Decoder& dec,
                                        double tol = kRoundTripTol) {
  return verify_roundtrip(inst.channel, c, dec, tol);
}

struct DarknessAuditReport {
  ComplexMatrix induced_alpha;  // (i, j) ↦ scalar value of C†Φ^C(E_ij)C
  double max_scalar_residual = 0.0;
  bool pass = false;
};

/// A strongly protected code must leave nothing in the environment:
/// C†Φ^C(Y)C is a scalar for every ancilla operator Y.
inline DarknessAuditReport protection_implies_darkness_audit(const KrausChannel& ch, const Isometry& c,
                                                             const Decoder& dec, double tol = kDefaultTol) {
  if (dec.mode != DecoderMode::Strong) {
    throw Error(ErrorKind::InvalidArgument, "audit applies to strong decoders only");
  }
  if (!verify_roundtrip(ch, c, dec).pass) {
    throw Error(ErrorKind::InvalidArgument, "audit needs a passing strong round trip");
  }
  const std::size_t m = ch.size();
  DarknessAuditReport rep{ComplexMatrix(m, m), 0.0, false};
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const ComplexMatrix x = c.compress(conjugate_apply(ch, matrix_unit(m, m, i, j)));
      rep.induced_alpha(i, j) = trace(x) / static_cast<double>(c.k());
      rep.max_scalar_residual = std::max(rep.max_scalar_residual, detail::scalar_defect(x, rep.induced_alpha(i, j)));
    }
  }
  if (rep.max_scalar_residual > tol) {
    throw Error(ErrorKind::AuditFailed, "compressed conjugate channel is not scalar: residual " +
                                            std::to_string(rep.max_scalar_residual));
  }
  rep.pass = true;
  return rep;
}

}  // namespace protsub

#endif  // PROTSUB_RECOVERY_HPP
