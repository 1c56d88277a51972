#ifndef PROTSUB_CODES_HPP
#define PROTSUB_CODES_HPP

// Darkness and Knill-Laflamme certification plus constructive code finders.
//
// α is stored in the index order of the KL condition:
//   α_ij = tr(C†A_i†A_jC)/k,  so  C†Φ^C(Y)C = Σ_ij Y_ij α_ij · 1.

#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "protsub/channels.hpp"
#include "protsub/isometry.hpp"
#include "protsub/linalg.hpp"
#include "protsub/numrange.hpp"
#include "protsub/random.hpp"

namespace protsub {

enum class ProtectionClass { NotDark = 0, Dark = 1, CompletelyDark = 2, DecoherenceFree = 3 };

constexpr const char* to_string(ProtectionClass c) {
  switch (c) {
    case ProtectionClass::NotDark: return "NotDark";
    case ProtectionClass::Dark: return "Dark";
    case ProtectionClass::CompletelyDark: return "CompletelyDark";
    case ProtectionClass::DecoherenceFree: return "DecoherenceFree";
  }
  return "?";
}

inline std::optional<ProtectionClass> protection_class_from_string(const std::string& s) {
  for (auto c : {ProtectionClass::NotDark, ProtectionClass::Dark, ProtectionClass::CompletelyDark,
                 ProtectionClass::DecoherenceFree}) {
    if (s == to_string(c)) return c;
  }
  return std::nullopt;
}

struct CodeCertificate {
  ProtectionClass klass = ProtectionClass::NotDark;
  std::vector<double> lambdas;
  std::optional<ComplexMatrix> alpha;
  std::optional<double> entropy;
  /// Max-norm defects keyed by condition: "darkness", "lambda_sum",
  /// "knill_laflamme", "kl_cross", "alpha_idempotence", ...
  std::map<std::string, double> residuals;
  double tol = kDefaultTol;

  bool at_least(ProtectionClass c) const { return static_cast<int>(klass) >= static_cast<int>(c); }
};

/// Entropies below this are "pure" when validating a DecoherenceFree claim.
inline constexpr double kEntropyTol = 1e-8;

namespace detail {

inline void require_code_shape(const KrausChannel& ch, const Isometry& c) {
  if (c.n() != ch.dim()) {
    throw Error(ErrorKind::ShapeMismatch, "code ambient dimension " + std::to_string(c.n()) +
                                              " vs channel dimension " + std::to_string(ch.dim()));
  }
}

inline double scalar_defect(const ComplexMatrix& m, Complex value) {
  return max_norm(m - value * ComplexMatrix::identity(m.rows()));
}

}  // namespace detail

/// S = −Σ μ ln μ over the eigenvalues of α (negatives clamped to 0).
inline double code_entropy(const ComplexMatrix& alpha) {
  const auto eig = eig_hermitian(detail::hermitian_part(alpha), 1e-8);
  double s = 0.0;
  for (const auto& mu : eig.values) {
    const double x = mu.real();
    if (x > 0.0) s -= x * std::log(x);
  }
  return std::max(0.0, s);
}

/// C†A_i†A_iC = λ_i·1 for every i.
inline CodeCertificate check_darkness(const KrausChannel& ch, const Isometry& c, double tol = kDefaultTol) {
  detail::require_code_shape(ch, c);
  CodeCertificate cert;
  cert.tol = tol;
  const double k = static_cast<double>(c.k());
  double worst = 0.0;
  double sum = 0.0;
  for (const auto& a : ch.ops()) {
    const ComplexMatrix ac = a * c.matrix();
    const ComplexMatrix m = adjoint(ac) * ac;
    const double lambda = trace(m).real() / k;
    cert.lambdas.push_back(lambda);
    sum += lambda;
    worst = std::max(worst, detail::scalar_defect(m, lambda));
  }
  cert.residuals["darkness"] = worst;
  cert.residuals["lambda_sum"] = std::abs(sum - 1.0);
  cert.klass = worst <= tol ? ProtectionClass::Dark : ProtectionClass::NotDark;
  return cert;
}

/// Full classification: darkness, then C†A_i†A_jC = α_ij·1, then α² = α.
inline CodeCertificate check_knill_laflamme(const KrausChannel& ch, const Isometry& c,
                                            double tol = kDefaultTol) {
  CodeCertificate cert = check_darkness(ch, c, tol);
  const std::size_t m = ch.size();
  const double k = static_cast<double>(c.k());
  std::vector<ComplexMatrix> ac;
  for (const auto& a : ch.ops()) ac.push_back(a * c.matrix());
  ComplexMatrix alpha(m, m);
  double worst = 0.0;
  double cross = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const ComplexMatrix mij = adjoint(ac[i]) * ac[j];
      alpha(i, j) = trace(mij) / k;
      const double d = detail::scalar_defect(mij, alpha(i, j));
      worst = std::max(worst, d);
      if (i != j) cross = std::max(cross, d);
    }
  }
  cert.residuals["knill_laflamme"] = worst;
  cert.residuals["kl_cross"] = cross;
  cert.alpha = alpha;
  cert.entropy = code_entropy(alpha);
  const double idem = max_norm(alpha * alpha - alpha);
  cert.residuals["alpha_idempotence"] = idem;
  if (cert.klass == ProtectionClass::Dark && worst <= tol) {
    cert.klass = idem <= tol ? ProtectionClass::DecoherenceFree : ProtectionClass::CompletelyDark;
  }
  return cert;
}

/// Hierarchy and internal-consistency violations of a certificate (empty when valid).
inline std::vector<std::string> validate_certificate(const CodeCertificate& cert) {
  std::vector<std::string> bad;
  const double tol = cert.tol;
  const double m = static_cast<double>(cert.lambdas.size());
  auto residual = [&](const char* key) -> std::optional<double> {
    auto it = cert.residuals.find(key);
    if (it == cert.residuals.end()) return std::nullopt;
    return it->second;
  };
  if (cert.at_least(ProtectionClass::Dark)) {
    double sum = 0.0;
    for (double l : cert.lambdas) {
      if (l < -tol) bad.push_back("negative lambda");
      sum += l;
    }
    if (std::abs(sum - 1.0) > std::max(1.0, m) * tol) bad.push_back("lambdas do not sum to 1");
    const auto d = residual("darkness");
    if (!d || *d > tol) bad.push_back("Dark claimed but darkness residual exceeds tol");
  }
  if (cert.at_least(ProtectionClass::CompletelyDark)) {
    if (!cert.alpha) {
      bad.push_back("alpha missing");
    } else {
      const ComplexMatrix& a = *cert.alpha;
      if (a.rows() != cert.lambdas.size() || !a.is_square()) {
        bad.push_back("alpha shape");
      } else {
        if (hermiticity_residual(a) > tol) bad.push_back("alpha not Hermitian");
        if (std::abs(trace(a) - 1.0) > std::max(1.0, m) * tol) bad.push_back("trace(alpha) != 1");
        for (std::size_t i = 0; i < a.rows(); ++i) {
          if (std::abs(a(i, i) - cert.lambdas[i]) > tol) bad.push_back("diag(alpha) != lambdas");
        }
        const auto eig = eig_hermitian(detail::hermitian_part(a), 1e-8);
        if (!eig.values.empty() && eig.values.front().real() < -std::max(1.0, m) * tol) {
          bad.push_back("alpha not PSD");
        }
      }
    }
    const auto kl = residual("knill_laflamme");
    if (!kl || *kl > tol) bad.push_back("CompletelyDark claimed but KL residual exceeds tol");
  }
  if (cert.klass == ProtectionClass::DecoherenceFree) {
    if (cert.alpha && max_norm(*cert.alpha * *cert.alpha - *cert.alpha) > tol) bad.push_back("alpha not pure");
    if (!cert.entropy || *cert.entropy > kEntropyTol) bad.push_back("entropy of a DecoherenceFree code");
  }
  if (cert.entropy) {
    if (*cert.entropy < 0.0) bad.push_back("negative entropy");
    if (m > 0 && *cert.entropy > std::log(m) + 1e-9) bad.push_back("entropy above ln m");
  }
  return bad;
}

struct InvarianceReport {
  std::size_t trials = 0;
  double max_kl_residual = 0.0;
  double max_entropy_drift = 0.0;
  double max_congruence_error = 0.0;  // ‖α' − u†αu‖_max
  bool pass = false;
};

/// Re-runs the KL check under `trials` Haar-random Kraus rebasings.
inline InvarianceReport kraus_invariance_audit(const KrausChannel& ch, const Isometry& c, std::size_t trials,
                                               std::uint64_t seed, double tol = kDefaultTol) {
  const CodeCertificate base = check_knill_laflamme(ch, c, tol);
  if (!base.at_least(ProtectionClass::CompletelyDark)) {
    throw Error(ErrorKind::NotCompletelyDark, "audit needs a completely dark code");
  }
  InvarianceReport rep;
  rep.trials = trials;
  const CounterRng root(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    CounterRng rng = root.split(t);
    const ComplexMatrix u = random_unitary(ch.size(), rng);
    const KrausChannel rebased = rebase_kraus(ch, u);
    const CodeCertificate cert = check_knill_laflamme(rebased, c, tol);
    rep.max_kl_residual = std::max(rep.max_kl_residual, cert.residuals.at("knill_laflamme"));
    rep.max_entropy_drift = std::max(rep.max_entropy_drift, std::abs(*cert.entropy - *base.entropy));
    const ComplexMatrix expected = adjoint(u) * *base.alpha * u;
    rep.max_congruence_error = std::max(rep.max_congruence_error, max_norm(*cert.alpha - expected));
    if (cert.klass != base.klass) {
      throw Error(ErrorKind::AuditFailed, std::string("class changed to ") + to_string(cert.klass) +
                                              " under rebasing " + std::to_string(t));
    }
  }
  if (rep.max_entropy_drift > 1e-9) {
    throw Error(ErrorKind::AuditFailed, "entropy drift " + std::to_string(rep.max_entropy_drift));
  }
  if (rep.max_congruence_error > 1e-10) {
    throw Error(ErrorKind::AuditFailed, "alpha congruence error " + std::to_string(rep.max_congruence_error));
  }
  rep.pass = true;
  return rep;
}

// ---------------------------------------------------------------------------
// Constructive finders

struct CodeResult {
  Isometry code;
  CodeCertificate cert;
};

/// Two Kraus operators: T_1 = A_1†A_1 compressed at the midpoint of Λ_k(T_1),
/// k = int[(N+1)/2]; T_2 = 1 − T_1 takes the value 1 − λ on the same space.
inline CodeResult find_dark_rank2(const KrausChannel& ch, double tol = kDefaultTol,
                                  PairingScheme scheme = PairingScheme::Mirror) {
  if (ch.size() != 2) throw Error(ErrorKind::WrongKrausCount, "rank-2 finder needs exactly 2 Kraus operators");
  const std::size_t n = ch.dim();
  const std::size_t k = (n + 1) / 2;
  const ComplexMatrix t1 = detail::hermitian_part(adjoint(ch.op(0)) * ch.op(0));
  const RealInterval range = lambda_k_hermitian(t1, k, tol);
  const double lambda = 0.5 * (range.lo + range.hi);
  const auto comp = construct_hermitian_compression(t1, k, lambda, scheme, tol);
  Isometry code(comp.C, tol);
  CodeCertificate cert = check_darkness(ch, code, tol);
  return {std::move(code), std::move(cert)};
}

/// Recovers S from a biased permutation channel: S[i][m] = (A_i†A_i)_mm.
inline RealMatrix biased_permutation_weights(const KrausChannel& ch, double tol = kDefaultTol) {
  RealMatrix s;
  for (const auto& a : ch.ops()) {
    const ComplexMatrix d = adjoint(a) * a;
    std::vector<double> row;
    for (std::size_t i = 0; i < d.rows(); ++i) {
      for (std::size_t j = 0; j < d.cols(); ++j) {
        if (i != j && std::abs(d(i, j)) > tol) {
          throw Error(ErrorKind::NotBiasedPermutation, "A_i†A_i is not diagonal");
        }
      }
      row.push_back(d(i, i).real());
    }
    s.push_back(std::move(row));
  }
  return s;
}

/// Mirror code ψ_m = (e_m + e_{N+1−m})/√2; requires S_{i,m} + S_{i,N+1−m}
/// to be constant along every row.
inline CodeResult find_dark_biased_permutation(const KrausChannel& ch, double tol = kDefaultTol) {
  const std::size_t n = ch.dim();
  if (n % 2 != 0) throw Error(ErrorKind::OddDimension, "mirror code needs even N");
  const RealMatrix s = biased_permutation_weights(ch, tol);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double ref = s[i][0] + s[i][n - 1];
    for (std::size_t m = 1; m < n / 2; ++m) {
      if (std::abs(s[i][m] + s[i][n - 1 - m] - ref) > tol) {
        throw Error(ErrorKind::SymmetryViolated, "row " + std::to_string(i) + " breaks S_{i,m}+S_{i,N+1-m} symmetry");
      }
    }
  }
  const std::size_t k = n / 2;
  ComplexMatrix c(n, k);
  const double h = std::numbers::sqrt2 / 2.0;
  for (std::size_t m = 0; m < k; ++m) {
    c(m, m) = h;
    c(n - 1 - m, m) = h;
  }
  Isometry code(std::move(c), tol);
  CodeCertificate cert = check_darkness(ch, code, tol);
  return {std::move(code), std::move(cert)};
}

/// Joint compression of the POVM {A_i†A_i}: a rank-k dark space when found.
inline std::optional<CodeResult> find_dark_joint(const KrausChannel& ch, std::size_t k, double tol = kDefaultTol) {
  std::vector<ComplexMatrix> povm;
  for (const auto& e : povm_elements(ch)) povm.push_back(detail::hermitian_part(e));
  auto found = find_joint_compression(povm, k, tol);
  if (!found) return std::nullopt;
  Isometry code(found->C, tol);
  CodeCertificate cert = check_darkness(ch, code, tol);
  return CodeResult{std::move(code), std::move(cert)};
}

inline Isometry product_code(const Isometry& ca, const Isometry& cb) {
  return Isometry(tensor(ca.matrix(), cb.matrix()), 10.0 * kDefaultTol);
}

// ---------------------------------------------------------------------------
// Bi-unitary noise  A_1 = √q V_1, A_2 = √(1−q) V_2

struct BiunitaryCode {
  Isometry code;
  CodeCertificate cert;
  double q = 0.0;
  Complex lambda;        // C†(V_1†V_2)C = λ·1
  bool degenerate = false;
  ComplexMatrix U;       // V_1†V_2
};

/// α predicted from q and λ: [[q, √(q(1−q))λ], [√(q(1−q))λ*, 1−q]].
inline ComplexMatrix biunitary_alpha(double q, Complex lambda) {
  const double r = std::sqrt(q * (1.0 - q));
  return ComplexMatrix{{q, r * lambda}, {r * std::conj(lambda), 1.0 - q}};
}

inline BiunitaryCode biunitary_code(const KrausChannel& ch, double tol = kDefaultTol) {
  if (ch.size() != 2) throw Error(ErrorKind::NotBiunitary, "need exactly 2 Kraus operators");
  const std::size_t n = ch.dim();
  std::vector<ComplexMatrix> v;
  std::vector<double> q;
  for (const auto& a : ch.ops()) {
    const double qi = trace(adjoint(a) * a).real() / static_cast<double>(n);
    if (!(qi > tol)) throw Error(ErrorKind::NotBiunitary, "Kraus operator with zero weight");
    ComplexMatrix vi = (1.0 / std::sqrt(qi)) * a;
    if (isometry_residual(vi) > 10.0 * tol / qi) {
      throw Error(ErrorKind::NotBiunitary, "Kraus operator is not proportional to a unitary");
    }
    q.push_back(qi);
    v.push_back(std::move(vi));
  }
  const double utol = std::max(tol, 1e-9);
  const ComplexMatrix u = adjoint(v[0]) * v[1];
  const auto eig = eig_unitary(u, utol);

  BiunitaryCode out{Isometry(ComplexMatrix::identity(n)), {}, q[0], {}, false, u};
  std::optional<ComplexMatrix> c;
  for (const auto& cluster : detail::unitary_clusters(eig.values, detail::kDegeneratePhaseGap)) {
    if (cluster.size() >= 2) {
      c = select_columns(eig.vectors, cluster);
      out.degenerate = true;
      break;
    }
  }
  if (!c) {
    if (n != 4) throw Error(ErrorKind::NoCode, "non-degenerate chord construction needs dimension 4");
    c = lambda2_unitary_chord(u, utol).C;
  }
  out.code = Isometry(*c, tol);
  const ComplexMatrix cuc = out.code.compress(u);
  out.lambda = trace(cuc) / static_cast<double>(out.code.k());
  out.cert = check_knill_laflamme(ch, out.code, tol);
  if (!out.cert.at_least(ProtectionClass::CompletelyDark) ||
      (out.degenerate && out.cert.klass != ProtectionClass::DecoherenceFree)) {
    throw Error(ErrorKind::NoCode, "spectrum admits neither the chord nor the degenerate branch");
  }
  out.cert.residuals["alpha_formula"] = max_norm(*out.cert.alpha - biunitary_alpha(q[0], out.lambda));
  return out;
}

// ---------------------------------------------------------------------------
// Tri-unitary noise on C^3 ⊗ C^K

struct TriunitaryParams {
  double alpha = 2.0 * std::numbers::pi / 3.0;
  double xi = std::numbers::pi / 6.0;
  std::size_t K = 2;
  /// Explicit phases ξ_1..ξ_K of U_B; by default ξ_l = (l−1)ξ/(K−1).
  std::vector<double> xis;
  std::vector<double> q{0.5, 0.25, 0.25};
  /// Unitary F moving the eigenbasis: U ↦ FUF†, ψ ↦ Fψ.
  std::optional<ComplexMatrix> frame;
};

struct TriunitaryCode {
  KrausChannel channel;
  Isometry code;
  CodeCertificate cert;
  std::vector<double> weights;  // a_1, a_3, a_5
  Complex lambda_u1, lambda_u2, lambda_w;
  ComplexMatrix U1, U2, W;
  double compression_residual = 0.0;
};

inline std::vector<double> triunitary_weights(double alpha) {
  const double c = std::cos(alpha);
  const double a1 = 1.0 + 1.0 / (c - 1.0);
  const double a3 = 1.0 / (2.0 - 2.0 * c);
  return {a1, a3, a3};
}

inline TriunitaryCode triunitary_code(const TriunitaryParams& p, double tol = kDefaultTol) {
  using std::numbers::pi;
  if (p.K < 2) throw Error(ErrorKind::InvalidArgument, "K must be at least 2");
  if (!(p.alpha > pi / 2.0 && p.alpha < pi)) {
    throw Error(ErrorKind::PhaseOutOfRange, "alpha must lie in (pi/2, pi)");
  }
  std::vector<double> xis = p.xis;
  if (xis.empty()) {
    if (!(p.xi > 0.0 && p.xi < std::min(p.alpha, 2.0 * (pi - p.alpha)))) {
      throw Error(ErrorKind::PhaseOutOfRange, "xi must lie in (0, min{alpha, 2(pi - alpha)})");
    }
    for (std::size_t l = 0; l < p.K; ++l) xis.push_back(p.xi * static_cast<double>(l) / static_cast<double>(p.K - 1));
  } else if (xis.size() != p.K) {
    throw Error(ErrorKind::ShapeMismatch, "need K explicit phases");
  }
  const std::size_t n = 3 * p.K;
  const Complex i1{0.0, 1.0};
  const ComplexMatrix ua = ComplexMatrix::diagonal({1.0, std::exp(-i1 * p.alpha), std::exp(i1 * p.alpha)});
  ComplexVector ub_diag;
  for (double x : xis) ub_diag.push_back(std::exp(i1 * x));
  const ComplexMatrix ub = ComplexMatrix::diagonal(ub_diag);
  ComplexMatrix u1 = tensor(adjoint(ua), ub);
  ComplexMatrix u2 = tensor(ua, ub);
  ComplexMatrix w = tensor(ua * ua, ComplexMatrix::identity(p.K));

  const std::vector<double> a = triunitary_weights(p.alpha);
  ComplexMatrix c(n, p.K);
  for (std::size_t l = 0; l < p.K; ++l)
    for (std::size_t j = 0; j < 3; ++j) c(j * p.K + l, l) = std::sqrt(a[j]);

  if (p.frame) {
    const ComplexMatrix& f = *p.frame;
    if (f.rows() != n || f.cols() != n) throw Error(ErrorKind::ShapeMismatch, "frame must be 3K x 3K");
    if (isometry_residual(f) > tol) throw Error(ErrorKind::NotUnitary, "frame is not unitary");
    u1 = f * u1 * adjoint(f);
    u2 = f * u2 * adjoint(f);
    w = f * w * adjoint(f);
    c = f * c;
  }
  Isometry code(c, tol);
  const ComplexMatrix ops[] = {ComplexMatrix::identity(n), u1, u2};
  KrausChannel channel = ref_channel(ops, p.q, tol);

  TriunitaryCode out{std::move(channel), std::move(code), {}, a, {}, {}, {}, u1, u2, w, 0.0};
  const double k = static_cast<double>(p.K);
  const ComplexMatrix m1 = out.code.compress(u1);
  const ComplexMatrix m2 = out.code.compress(u2);
  const ComplexMatrix mw = out.code.compress(w);
  out.lambda_u1 = trace(m1) / k;
  out.lambda_u2 = trace(m2) / k;
  out.lambda_w = trace(mw) / k;
  out.compression_residual = std::max({detail::scalar_defect(m1, out.lambda_u1),
                                       detail::scalar_defect(m2, out.lambda_u2),
                                       detail::scalar_defect(mw, out.lambda_w)});
  out.cert = check_knill_laflamme(out.channel, out.code, tol);
  out.cert.residuals["compression"] = out.compression_residual;
  if (!out.cert.at_least(ProtectionClass::CompletelyDark)) {
    throw Error(ErrorKind::NoCode, "tri-unitary code failed the KL check");
  }
  return out;
}

}  // namespace protsub

#endif  // PROTSUB_CODES_HPP
