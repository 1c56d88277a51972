#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace protsub;
using namespace testutil;

namespace {

KrausChannel biunitary_channel(double q, const ComplexMatrix& v1, const ComplexMatrix& v2) {
  return new_kraus({std::sqrt(q) * v1, std::sqrt(1.0 - q) * v2});
}

// Direct α_ij = tr(C†A_i†A_jC)/k without the library.
ComplexMatrix direct_alpha(const KrausChannel& ch, const ComplexMatrix& c) {
  const std::size_t m = ch.size();
  ComplexMatrix a(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      a(i, j) = trace(adjoint(c) * adjoint(ch.op(i)) * ch.op(j) * c) / static_cast<double>(c.cols());
  return a;
}

double entropy_of(std::initializer_list<double> p) {
  double s = 0.0;
  for (double x : p)
    if (x > 0) s -= x * std::log(x);
  return s;
}

}  // namespace

TEST(Classes, StringsRoundTrip) {
  for (auto c : {ProtectionClass::NotDark, ProtectionClass::Dark, ProtectionClass::CompletelyDark,
                 ProtectionClass::DecoherenceFree}) {
    EXPECT_EQ(protection_class_from_string(to_string(c)), c);
  }
  EXPECT_FALSE(protection_class_from_string("Bright").has_value());
  CodeCertificate cert;
  cert.klass = ProtectionClass::CompletelyDark;
  EXPECT_TRUE(cert.at_least(ProtectionClass::Dark));
  EXPECT_FALSE(cert.at_least(ProtectionClass::DecoherenceFree));
}

TEST(Darkness, RandomUnitaryErrorsGiveDarkWithLambdaEqualQ) {
  CounterRng rng(41);
  const ComplexMatrix us[] = {ComplexMatrix::identity(4), random_unitary(4, rng), random_unitary(4, rng)};
  const double q[] = {0.5, 0.3, 0.2};
  const auto ch = ref_channel(us, q);
  const Isometry c(orthonormalize_columns(random_matrix(4, 2, rng)));
  const auto cert = check_darkness(ch, c);
  EXPECT_EQ(cert.klass, ProtectionClass::Dark);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(cert.lambdas[i], q[i], 1e-12);
  EXPECT_LT(cert.residuals.at("darkness"), 1e-12);
  EXPECT_TRUE(validate_certificate(cert).empty());
}

TEST(Darkness, RandomSubspaceOfGenericChannelIsNotDark) {
  CounterRng rng(42);
  const auto ch = random_channel(4, 3, rng);
  const Isometry c(orthonormalize_columns(random_matrix(4, 2, rng)));
  const auto cert = check_darkness(ch, c);
  EXPECT_EQ(cert.klass, ProtectionClass::NotDark);
  EXPECT_GT(cert.residuals.at("darkness"), 1e-3);
  EXPECT_TRUE(validate_certificate(cert).empty());
}

TEST(KnillLaflamme, UnitaryChannelIsDecoherenceFree) {
  CounterRng rng(43);
  const auto ch = unitary_channel(random_unitary(5, rng));
  const Isometry c(orthonormalize_columns(random_matrix(5, 3, rng)));
  const auto cert = check_knill_laflamme(ch, c);
  EXPECT_EQ(cert.klass, ProtectionClass::DecoherenceFree);
  ASSERT_TRUE(cert.alpha.has_value());
  EXPECT_NEAR(std::abs((*cert.alpha)(0, 0) - 1.0), 0.0, 1e-12);
  EXPECT_LT(*cert.entropy, kEntropyTol);
  EXPECT_TRUE(validate_certificate(cert).empty());
}

TEST(KnillLaflamme, AlphaMatchesDirectComputation) {
  CounterRng rng(44);
  // Random unitary mixtures: any subspace is dark, KL generally fails.
  const ComplexMatrix us[] = {ComplexMatrix::identity(4), random_unitary(4, rng)};
  const double q[] = {0.6, 0.4};
  const auto ch = ref_channel(us, q);
  const ComplexMatrix c = orthonormalize_columns(random_matrix(4, 2, rng));
  const auto cert = check_knill_laflamme(ch, Isometry(c));
  const auto ref = direct_alpha(ch, c);
  EXPECT_LT(max_norm(*cert.alpha - ref), 1e-12);
  EXPECT_LT(hermiticity_residual(*cert.alpha), 1e-14);
  EXPECT_NEAR(trace(*cert.alpha).real(), 1.0, 1e-12);
}

TEST(KnillLaflamme, BiasedPermutationIsDarkOnly) {
  const auto ch = example_biased_channel();
  const auto res = find_dark_biased_permutation(ch);
  const auto cert = check_knill_laflamme(ch, res.code);
  EXPECT_EQ(cert.klass, ProtectionClass::Dark);
  EXPECT_GT(cert.residuals.at("kl_cross"), 0.1);
  EXPECT_TRUE(validate_certificate(cert).empty());
}

TEST(BiasedPermutation, MirrorCodeAndLambdas) {
  const auto ch = example_biased_channel();
  const auto res = find_dark_biased_permutation(ch);
  EXPECT_EQ(res.cert.klass, ProtectionClass::Dark);
  ASSERT_EQ(res.code.k(), 2u);
  const double h = std::sqrt(0.5);
  EXPECT_NEAR(res.code.matrix()(0, 0).real(), h, 1e-15);
  EXPECT_NEAR(res.code.matrix()(3, 0).real(), h, 1e-15);
  EXPECT_NEAR(res.code.matrix()(1, 1).real(), h, 1e-15);
  EXPECT_NEAR(res.code.matrix()(2, 1).real(), h, 1e-15);
  const auto s = example_weights();
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(res.cert.lambdas[i], 0.5 * (s[i][0] + s[i][3]), 1e-14);
  EXPECT_NEAR(res.cert.lambdas[0], 0.2, 1e-14);
  EXPECT_NEAR(res.cert.lambdas[1], 0.2, 1e-14);
  EXPECT_NEAR(res.cert.lambdas[2], 0.6, 1e-14);
  // Each A_i†A_i compressed by hand.
  for (const auto& a : ch.ops()) EXPECT_LT(scalar_residual(res.code.matrix(), adjoint(a) * a), 1e-14);
}

TEST(BiasedPermutation, WeightsRecoveredFromChannel) {
  const auto s = biased_permutation_weights(example_biased_channel());
  const auto ref = example_weights();
  for (int i = 0; i < 3; ++i)
    for (int m = 0; m < 4; ++m) EXPECT_NEAR(s[i][m], ref[i][m], 1e-14);
  CounterRng rng(45);
  EXPECT_TRUE(throws_kind([&] { biased_permutation_weights(random_channel(4, 2, rng)); },
                          ErrorKind::NotBiasedPermutation));
}

TEST(BiasedPermutation, SymmetryViolationDetected) {
  auto s = example_weights();
  s[0][0] += 1e-3;
  s[2][0] -= 1e-3;
  const auto ch = biased_permutation_channel(s, example_perms());
  EXPECT_TRUE(throws_kind([&] { find_dark_biased_permutation(ch); }, ErrorKind::SymmetryViolated));
}

TEST(BiasedPermutation, OddDimensionRejected) {
  const RealMatrix s{{0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}};
  const std::vector<Permutation> p{{0, 1, 2}, {1, 2, 0}};
  const auto ch = biased_permutation_channel(s, p);
  EXPECT_TRUE(throws_kind([&] { find_dark_biased_permutation(ch); }, ErrorKind::OddDimension));
}

TEST(BiasedPermutation, JointSolverAgrees) {
  const auto ch = example_biased_channel();
  const auto res = find_dark_joint(ch, 2);
  ASSERT_TRUE(res.has_value());
  EXPECT_EQ(res->cert.klass, ProtectionClass::Dark);
  EXPECT_NEAR(res->cert.lambdas[2], 0.6, 1e-12);
}

TEST(Rank2, FindsDarkCodeOfHalfDimension) {
  CounterRng rng(46);
  for (std::size_t n : {2u, 3u, 4u, 5u, 6u, 7u}) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto ch = random_rank2_channel(n, rng);
      const auto res = find_dark_rank2(ch);
      EXPECT_EQ(res.code.k(), (n + 1) / 2);
      EXPECT_TRUE(res.cert.at_least(ProtectionClass::Dark));
      EXPECT_NEAR(res.cert.lambdas[0] + res.cert.lambdas[1], 1.0, 1e-12);
      for (const auto& a : ch.ops()) EXPECT_LT(scalar_residual(res.code.matrix(), adjoint(a) * a), 1e-10);
      EXPECT_TRUE(validate_certificate(res.cert).empty());
    }
  }
  EXPECT_TRUE(throws_kind([&] { find_dark_rank2(random_channel(4, 3, rng)); }, ErrorKind::WrongKrausCount));
}

TEST(ProductCode, DimensionsAndLambdas) {
  CounterRng rng(47);
  const auto a = example_biased_channel();
  const auto b = random_rank2_channel(6, rng);
  const auto ca = find_dark_biased_permutation(a);
  const auto cb = find_dark_rank2(b);
  const auto ch = product_channel(a, b);
  const Isometry c = product_code(ca.code, cb.code);
  EXPECT_EQ(c.n(), 24u);
  EXPECT_EQ(c.k(), 6u);
  const auto cert = check_darkness(ch, c);
  EXPECT_TRUE(cert.at_least(ProtectionClass::Dark));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      EXPECT_NEAR(cert.lambdas[i * 2 + j], ca.cert.lambdas[i] * cb.cert.lambdas[j], 1e-12);
}

TEST(Biunitary, ChordCodeAlphaFormula) {
  const double q = 0.3;
  const ComplexMatrix v2 = ComplexMatrix::diagonal({1.0, Complex{0, 1}, -1.0, Complex{0, -1}});
  const auto ch = biunitary_channel(q, ComplexMatrix::identity(4), v2);
  const auto res = biunitary_code(ch);
  EXPECT_FALSE(res.degenerate);
  EXPECT_NEAR(res.q, q, 1e-14);
  EXPECT_LT(std::abs(res.lambda), 1e-12);
  EXPECT_EQ(res.cert.klass, ProtectionClass::CompletelyDark);
  const auto ref = direct_alpha(ch, res.code.matrix());
  EXPECT_LT(max_norm(*res.cert.alpha - ref), 1e-12);
  EXPECT_LT(max_norm(biunitary_alpha(q, res.lambda) - ref), 1e-12);
  EXPECT_NEAR(*res.cert.entropy, entropy_of({0.3, 0.7}), 1e-9);
  EXPECT_NEAR(*res.cert.entropy, 0.6109, 1e-4);
  EXPECT_TRUE(validate_certificate(res.cert).empty());
}

TEST(Biunitary, RandomFrames) {
  CounterRng rng(48);
  for (int rep = 0; rep < 20; ++rep) {
    const double q = 0.1 + 0.8 * rng.uniform();
    const ComplexMatrix v1 = random_unitary(4, rng), v2 = random_unitary(4, rng);
    const auto ch = biunitary_channel(q, v1, v2);
    const auto res = biunitary_code(ch);
    EXPECT_TRUE(res.cert.at_least(ProtectionClass::CompletelyDark));
    const auto ref = direct_alpha(ch, res.code.matrix());
    EXPECT_LT(max_norm(biunitary_alpha(q, res.lambda) - ref), 1e-10);
    const double r = std::sqrt(q * (1 - q)), mod = std::abs(res.lambda);
    // Eigenvalues of α: (1 ± √(1 − 4(q(1−q))(1 − |λ|²)))/2.
    const double disc = std::sqrt(1.0 - 4.0 * r * r * (1.0 - mod * mod));
    EXPECT_NEAR(*res.cert.entropy, entropy_of({0.5 * (1 + disc), 0.5 * (1 - disc)}), 1e-9);
  }
}

TEST(Biunitary, DegenerateEigenvalueGivesDecoherenceFree) {
  CounterRng rng(49);
  const ComplexMatrix f = random_unitary(4, rng);
  const ComplexMatrix v2 = f * diag_unitary({1.1, 1.1, 2.5, 4.0}) * adjoint(f);
  const auto ch = biunitary_channel(0.4, ComplexMatrix::identity(4), v2);
  const auto res = biunitary_code(ch);
  EXPECT_TRUE(res.degenerate);
  EXPECT_EQ(res.code.k(), 2u);
  EXPECT_EQ(res.cert.klass, ProtectionClass::DecoherenceFree);
  EXPECT_NEAR(std::abs(res.lambda), 1.0, 1e-10);
  EXPECT_LT(*res.cert.entropy, kEntropyTol);
}

TEST(Biunitary, RejectsNonUnitaryPairs) {
  CounterRng rng(50);
  EXPECT_TRUE(throws_kind([&] { biunitary_code(random_rank2_channel(4, rng)); }, ErrorKind::NotBiunitary));
}

TEST(Triunitary, DefaultParameters) {
  const auto res = triunitary_code({});
  EXPECT_EQ(res.code.n(), 6u);
  EXPECT_EQ(res.code.k(), 2u);
  EXPECT_NEAR(res.weights[0], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(res.weights[1], 1.0 / 3.0, 1e-15);
  EXPECT_LT(std::abs(res.lambda_u1), 1e-14);
  EXPECT_LT(std::abs(res.lambda_u2), 1e-14);
  EXPECT_LT(std::abs(res.lambda_w), 1e-14);
  EXPECT_LT(res.compression_residual, 1e-14);
  EXPECT_EQ(res.cert.klass, ProtectionClass::CompletelyDark);
  // All cross terms vanish, so α = diag(q).
  const auto ref = direct_alpha(res.channel, res.code.matrix());
  EXPECT_LT(max_norm(ref - ComplexMatrix::diagonal({0.5, 0.25, 0.25})), 1e-14);
  EXPECT_NEAR(*res.cert.entropy, entropy_of({0.5, 0.25, 0.25}), 1e-12);
  EXPECT_TRUE(validate_certificate(res.cert).empty());
}

TEST(Triunitary, WeightsAtThreeQuarterPi) {
  const double al = 3.0 * kPi / 4.0;
  const auto w = triunitary_weights(al);
  EXPECT_NEAR(w[0], std::sqrt(2.0) - 1.0, 1e-14);
  EXPECT_NEAR(w[1], 1.0 - std::sqrt(2.0) / 2.0, 1e-14);
  EXPECT_NEAR(w[0] + 2 * w[1], 1.0, 1e-15);
  TriunitaryParams p;
  p.alpha = al;
  p.xi = 0.3;
  const auto res = triunitary_code(p);
  EXPECT_LT(std::abs(res.lambda_u1), 1e-14);
  EXPECT_NEAR(res.lambda_w.real(), -1.0 - 2.0 * std::cos(al), 1e-14);
  EXPECT_NEAR(res.lambda_w.real(), std::sqrt(2.0) - 1.0, 1e-14);
}

TEST(Triunitary, CodeVectorsAreProductStates) {
  const auto res = triunitary_code({});
  const auto& c = res.code.matrix();
  for (std::size_t l = 0; l < 2; ++l) {
    ComplexMatrix m(3, 2);
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t r = 0; r < 2; ++r) m(j, r) = c(j * 2 + r, l);
    EXPECT_EQ(numerical_rank(m), 1u);
  }
}

TEST(Triunitary, GeneralKAndRange) {
  for (std::size_t k = 2; k <= 5; ++k) {
    TriunitaryParams p;
    p.K = k;
    const auto res = triunitary_code(p);
    EXPECT_EQ(res.code.k(), k);
    EXPECT_EQ(res.code.n(), 3 * k);
    EXPECT_EQ(res.cert.klass, ProtectionClass::CompletelyDark);
    EXPECT_LT(res.compression_residual, 1e-13);
  }
  for (double al : {kPi / 2, kPi / 3, kPi, 4.0}) {
    TriunitaryParams p;
    p.alpha = al;
    p.xi = 0.1;
    EXPECT_TRUE(throws_kind([&] { triunitary_code(p); }, ErrorKind::PhaseOutOfRange));
  }
  TriunitaryParams p;
  p.xi = 2 * (kPi - p.alpha);
  EXPECT_TRUE(throws_kind([&] { triunitary_code(p); }, ErrorKind::PhaseOutOfRange));
  p.xi = 0.0;
  EXPECT_TRUE(throws_kind([&] { triunitary_code(p); }, ErrorKind::PhaseOutOfRange));
}

TEST(Triunitary, RandomFrameKeepsCertificate) {
  CounterRng rng(51);
  TriunitaryParams p;
  p.frame = random_unitary(6, rng);
  const auto res = triunitary_code(p);
  EXPECT_EQ(res.cert.klass, ProtectionClass::CompletelyDark);
  EXPECT_LT(res.compression_residual, 1e-12);
  const auto plain = triunitary_code({});
  EXPECT_LT(max_norm(*res.cert.alpha - *plain.cert.alpha), 1e-12);
}

TEST(InvarianceAudit, RebasingPreservesClassAndEntropy) {
  const auto tri = triunitary_code({});
  const auto rep = kraus_invariance_audit(tri.channel, tri.code, 100, 7);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.trials, 100u);
  EXPECT_LT(rep.max_entropy_drift, 1e-9);
  EXPECT_LT(rep.max_congruence_error, 1e-10);
  EXPECT_LT(rep.max_kl_residual, 1e-10);

  const ComplexMatrix v2 = ComplexMatrix::diagonal({1.0, Complex{0, 1}, -1.0, Complex{0, -1}});
  const auto ch = biunitary_channel(0.3, ComplexMatrix::identity(4), v2);
  const auto bi = biunitary_code(ch);
  EXPECT_TRUE(kraus_invariance_audit(ch, bi.code, 100, 8).pass);

  const auto bp = find_dark_biased_permutation(example_biased_channel());
  EXPECT_TRUE(throws_kind([&] { kraus_invariance_audit(example_biased_channel(), bp.code, 10, 1); },
                          ErrorKind::NotCompletelyDark));
}

TEST(ValidateCertificate, CatchesInconsistentClaims) {
  auto cert = triunitary_code({}).cert;
  EXPECT_TRUE(validate_certificate(cert).empty());

  auto bad = cert;
  bad.klass = ProtectionClass::DecoherenceFree;
  EXPECT_FALSE(validate_certificate(bad).empty());

  bad = cert;
  bad.lambdas[0] += 0.1;
  EXPECT_FALSE(validate_certificate(bad).empty());

  bad = cert;
  bad.residuals["knill_laflamme"] = 1e-3;
  EXPECT_FALSE(validate_certificate(bad).empty());

  bad = cert;
  (*bad.alpha)(0, 1) = 0.2;
  EXPECT_FALSE(validate_certificate(bad).empty());

  bad = cert;
  bad.alpha.reset();
  EXPECT_FALSE(validate_certificate(bad).empty());

  bad = cert;
  bad.entropy = 5.0;
  EXPECT_FALSE(validate_certificate(bad).empty());
}
