#ifndef PROTSUB_SIMULATOR_HPP
#define PROTSUB_SIMULATOR_HPP

// Monte-Carlo runs of an instrument on code states: outcome statistics
// (darkness) and outcome-conditioned restoration.

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "protsub/channels.hpp"
#include "protsub/codes.hpp"
#include "protsub/isometry.hpp"
#include "protsub/random.hpp"
#include "protsub/recovery.hpp"

namespace protsub {

enum class InputSource { RandomCodeState, FixedState };

struct TrajectoryConfig {
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
  InputSource input_source = InputSource::RandomCodeState;
  ComplexVector fixed_state;  // coordinates in L (length k) for FixedState
  double tol = kDefaultTol;
  double p_threshold = 1e-4;  // chi-square gate
  double sigma = 4.0;         // per-bin binomial gate
  double fidelity_tol = 1e-9;
  /// Refuse non-dark codes (NotDark) instead of reporting the failure.
  bool require_dark = true;
};

struct TrajectoryReport {
  std::vector<std::uint64_t> outcome_counts;
  std::vector<double> expected_probs;
  double chi_square = 0.0;
  double p_value = 1.0;
  double max_bin_sigma = 0.0;
  bool pooled_pass = false;
  /// Pairwise comparison over the fixed probe states (darkness runs only).
  std::optional<double> state_independence_max_sigma;
  std::optional<bool> state_independence_pass;
  double restoration_fidelity_min = 1.0;
  double max_probability_defect = 0.0;  // |Σ_i p_i − 1| over all draws
  bool pass = false;
};

struct Sample {
  std::size_t outcome = 0;
  ComplexVector post_state;
  double probability = 0.0;
  double probability_sum = 0.0;
};

/// Outcome i with probability ‖A_iψ‖², post-state A_iψ/‖A_iψ‖.
inline Sample sample_outcome(const Instrument& inst, std::span<const Complex> psi, CounterRng& rng) {
  const KrausChannel& ch = inst.channel;
  if (psi.size() != ch.dim()) throw Error(ErrorKind::ShapeMismatch, "state dimension");
  const double nv = norm(psi);
  if (std::abs(nv - 1.0) > 1e-9) throw Error(ErrorKind::InvalidArgument, "state must be normalized");
  std::vector<ComplexVector> images;
  std::vector<double> p;
  double total = 0.0;
  for (const auto& a : ch.ops()) {
    images.push_back(a * psi);
    const double pi = norm(images.back()) * norm(images.back());
    p.push_back(pi);
    total += pi;
  }
  const double u = rng.uniform() * total;
  double cum = 0.0;
  std::size_t pick = p.size();
  for (std::size_t i = 0; i < p.size(); ++i) {
    cum += p[i];
    if (u < cum && p[i] > 0.0) {
      pick = i;
      break;
    }
  }
  if (pick == p.size()) {
    // u landed on the rounding slack past the last bin.
    for (std::size_t i = p.size(); i-- > 0;) {
      if (p[i] > 0.0) {
        pick = i;
        break;
      }
    }
  }
  if (pick == p.size()) throw Error(ErrorKind::ZeroProbabilityDraw, "all outcome probabilities vanish");
  Sample s;
  s.outcome = pick;
  s.probability = p[pick];
  s.probability_sum = total;
  const double scale = 1.0 / std::sqrt(p[pick]);
  s.post_state = std::move(images[pick]);
  for (auto& x : s.post_state) x *= scale;
  return s;
}

namespace detail {

struct PooledTest {
  double chi_square = 0.0;
  double p_value = 1.0;
  double max_sigma = 0.0;
  bool pass = false;
};

inline PooledTest pooled_test(const std::vector<std::uint64_t>& counts, const std::vector<double>& probs,
                              double p_threshold, double sigma) {
  PooledTest t;
  double n = 0.0;
  for (auto c : counts) n += static_cast<double>(c);
  bool impossible = false;
  int bins = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double o = static_cast<double>(counts[i]);
    const double p = std::clamp(probs[i], 0.0, 1.0);
    const double e = n * p;
    if (e <= 0.0) {
      impossible = impossible || counts[i] > 0;
      continue;
    }
    ++bins;
    t.chi_square += (o - e) * (o - e) / e;
    const double sd = std::sqrt(n * p * (1.0 - p));
    const double z = sd > 0.0 ? std::abs(o - e) / sd : (std::abs(o - e) > 0.5 ? INFINITY : 0.0);
    t.max_sigma = std::max(t.max_sigma, z);
  }
  t.p_value = bins > 1 ? boost::math::gamma_q(0.5 * (bins - 1), 0.5 * t.chi_square) : 1.0;
  t.pass = !impossible && t.p_value > p_threshold && t.max_sigma <= sigma;
  return t;
}

inline ComplexVector code_state(const Isometry& c, const TrajectoryConfig& cfg, CounterRng& rng) {
  if (cfg.input_source == InputSource::FixedState) {
    if (cfg.fixed_state.size() != c.k()) throw Error(ErrorKind::ShapeMismatch, "fixed state must live in L");
    ComplexVector x = cfg.fixed_state;
    const double nv = norm(x);
    if (nv < 1e-300) throw Error(ErrorKind::InvalidArgument, "zero fixed state");
    for (auto& v : x) v /= nv;
    return c.embed(x);
  }
  return c.embed(random_unit_vector(c.k(), rng));
}

// Five distinct probe states in L: the extreme eigenvectors of the most
// state-dependent compressed POVM element, then three Haar draws.
inline std::vector<ComplexVector> probe_states(const KrausChannel& ch, const Isometry& c, std::uint64_t seed) {
  std::vector<ComplexVector> probes;
  double best = -1.0;
  EigenDecomposition best_eig;
  for (const auto& a : ch.ops()) {
    const ComplexMatrix ac = a * c.matrix();
    const auto eig = eig_hermitian(hermitian_part(adjoint(ac) * ac), 1e-8);
    const double spread = eig.values.back().real() - eig.values.front().real();
    if (spread > best) {
      best = spread;
      best_eig = eig;
    }
  }
  const std::size_t k = c.k();
  probes.push_back(best_eig.vectors.col(0));
  if (k > 1) probes.push_back(best_eig.vectors.col(k - 1));
  CounterRng rng = CounterRng(seed).split(0xfeedULL);
  while (probes.size() < 5) probes.push_back(random_unit_vector(k, rng));
  return probes;
}

}  // namespace detail

/// Pooled outcome frequencies against λ_i, plus state independence across
/// five fixed probe states (trials split between them).
inline TrajectoryReport run_darkness_experiment(const Instrument& inst, const Isometry& c,
                                                const TrajectoryConfig& cfg) {
  if (cfg.trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be positive");
  const KrausChannel& ch = inst.channel;
  const CodeCertificate cert = check_darkness(ch, c, cfg.tol);
  if (cfg.require_dark && !cert.at_least(ProtectionClass::Dark)) {
    throw Error(ErrorKind::NotDark, "darkness experiment on a non-dark code");
  }
  const std::size_t m = ch.size();
  TrajectoryReport rep;
  rep.outcome_counts.assign(m, 0);
  rep.expected_probs = cert.lambdas;
  const CounterRng root(cfg.seed);
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    CounterRng rng = root.split(t);
    const ComplexVector psi = detail::code_state(c, cfg, rng);
    const Sample s = sample_outcome(inst, psi, rng);
    ++rep.outcome_counts[s.outcome];
    rep.max_probability_defect = std::max(rep.max_probability_defect, std::abs(s.probability_sum - 1.0));
  }
  const auto pooled = detail::pooled_test(rep.outcome_counts, rep.expected_probs, cfg.p_threshold, cfg.sigma);
  rep.chi_square = pooled.chi_square;
  rep.p_value = pooled.p_value;
  rep.max_bin_sigma = pooled.max_sigma;
  rep.pooled_pass = pooled.pass;

  const auto probes = detail::probe_states(ch, c, cfg.seed);
  std::vector<std::vector<std::uint64_t>> counts(probes.size(), std::vector<std::uint64_t>(m, 0));
  std::vector<double> totals(probes.size(), 0.0);
  const CounterRng probe_root = root.split(cfg.trials + 0x5eedULL);
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    CounterRng rng = probe_root.split(t);
    const std::size_t sidx = t % probes.size();
    const Sample s = sample_outcome(inst, c.embed(probes[sidx]), rng);
    ++counts[sidx][s.outcome];
    totals[sidx] += 1.0;
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < probes.size(); ++a) {
    for (std::size_t b = a + 1; b < probes.size(); ++b) {
      if (totals[a] == 0.0 || totals[b] == 0.0) continue;
      for (std::size_t i = 0; i < m; ++i) {
        const double pa = static_cast<double>(counts[a][i]) / totals[a];
        const double pb = static_cast<double>(counts[b][i]) / totals[b];
        const double pp = static_cast<double>(counts[a][i] + counts[b][i]) / (totals[a] + totals[b]);
        const double sd = std::sqrt(pp * (1.0 - pp) * (1.0 / totals[a] + 1.0 / totals[b]));
        if (sd > 0.0) worst = std::max(worst, std::abs(pa - pb) / sd);
      }
    }
  }
  rep.state_independence_max_sigma = worst;
  rep.state_independence_pass = worst <= cfg.sigma;
  rep.pass = rep.pooled_pass && *rep.state_independence_pass;
  return rep;
}

/// Per trial: ψ ∈ range(C), outcome l, recovered state C·D_l·(A_lψ)/‖·‖,
/// fidelity |⟨ψ|recovered⟩|². Passes iff every trial reaches 1 − fidelity_tol.
inline TrajectoryReport run_restoration_experiment(const Instrument& inst, const Isometry& c, const Decoder& dec,
                                                   const TrajectoryConfig& cfg) {
  if (cfg.trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be positive");
  if (dec.mode != DecoderMode::Weak) throw Error(ErrorKind::InvalidArgument, "restoration needs a weak decoder");
  const KrausChannel& ch = inst.channel;
  if (dec.D.size() != ch.size() || dec.k != c.k() || dec.n != c.n()) {
    throw Error(ErrorKind::ShapeMismatch, "decoder does not match instrument and code");
  }
  const CodeCertificate cert = check_darkness(ch, c, cfg.tol);
  if (!cert.at_least(ProtectionClass::Dark)) throw Error(ErrorKind::NotDark, "restoration on a non-dark code");

  TrajectoryReport rep;
  rep.outcome_counts.assign(ch.size(), 0);
  rep.expected_probs = cert.lambdas;
  const CounterRng root(cfg.seed);
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    CounterRng rng = root.split(t);
    const ComplexVector psi = detail::code_state(c, cfg, rng);
    const Sample s = sample_outcome(inst, psi, rng);
    ++rep.outcome_counts[s.outcome];
    rep.max_probability_defect = std::max(rep.max_probability_defect, std::abs(s.probability_sum - 1.0));
    const ComplexVector rec = c.embed(dec.D[s.outcome] * s.post_state);
    const double nr = norm(rec);
    const double fid = nr > 0.0 ? std::norm(dot(psi, rec)) / (nr * nr) : 0.0;
    rep.restoration_fidelity_min = std::min(rep.restoration_fidelity_min, fid);
  }
  const auto pooled = detail::pooled_test(rep.outcome_counts, rep.expected_probs, cfg.p_threshold, cfg.sigma);
  rep.chi_square = pooled.chi_square;
  rep.p_value = pooled.p_value;
  rep.max_bin_sigma = pooled.max_sigma;
  rep.pooled_pass = pooled.pass;
  rep.pass = rep.restoration_fidelity_min >= 1.0 - cfg.fidelity_tol;
  return rep;
}

}  // namespace protsub

#endif  // PROTSUB_SIMULATOR_HPP
