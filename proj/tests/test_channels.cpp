#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace protsub;
using namespace testutil;


TEST(NewKraus, IdentityChannel) {
  const auto ch = new_kraus({ComplexMatrix::identity(4)});
  EXPECT_EQ(ch.dim(), 4u);
  EXPECT_EQ(ch.size(), 1u);
  EXPECT_EQ(ch.completeness_residual(), 0.0);
}

TEST(NewKraus, MixtureWithUnitary) {
  CounterRng rng(1);
  const ComplexMatrix u = random_unitary(3, rng);
  const double q = 0.35;
  EXPECT_NO_THROW(new_kraus({std::sqrt(q) * ComplexMatrix::identity(3), std::sqrt(1 - q) * u}));
}

TEST(NewKraus, RejectsOverCompleteSet) {
  EXPECT_TRUE(throws_kind([] { new_kraus({ComplexMatrix::identity(2), ComplexMatrix::identity(2)}); }, ErrorKind::NotTracePreserving));
}

TEST(NewKraus, RejectsShapeAndNaN) {
  EXPECT_TRUE(throws_kind([] { new_kraus({ComplexMatrix::identity(2), ComplexMatrix(3, 3)}); }, ErrorKind::ShapeMismatch));
  EXPECT_TRUE(throws_kind([] { new_kraus({}); }, ErrorKind::ShapeMismatch));
  EXPECT_TRUE(throws_kind([] { new_kraus({ComplexMatrix(2, 3)}); }, ErrorKind::ShapeMismatch));
  ComplexMatrix bad = ComplexMatrix::identity(2);
  bad(0, 1) = std::numeric_limits<double>::infinity();
  EXPECT_TRUE(throws_kind([&] { new_kraus({bad}); }, ErrorKind::NotFinite));
}

TEST(Schrodinger, IdentityChannelIsIdentity) {
  CounterRng rng(2);
  const ComplexMatrix rho = random_density(3, rng);
  EXPECT_EQ(apply_schrodinger(new_kraus({ComplexMatrix::identity(3)}), rho), rho);
}

TEST(Schrodinger, RefChannelPreservesTrace) {
  CounterRng rng(3);
  const ComplexMatrix us[] = {random_unitary(4, rng), random_unitary(4, rng), random_unitary(4, rng)};
  const double q[] = {0.2, 0.3, 0.5};
  const auto ch = ref_channel(us, q);
  for (int i = 0; i < 20; ++i) {
    const ComplexMatrix rho = random_density(4, rng);
    EXPECT_NEAR(std::abs(trace(apply_schrodinger(ch, rho)) - trace(rho)), 0.0, 1e-12);
  }
}

TEST(Schrodinger, HermitianInHermitianOut) {
  CounterRng rng(4);
  const auto ch = random_channel(3, 4, rng);
  for (int i = 0; i < 100; ++i) {
    const ComplexMatrix h = random_hermitian(3, rng);
    const ComplexMatrix out = apply_schrodinger(ch, h);
    // Oracle: direct element-wise Kraus sum.
    ComplexMatrix direct(3, 3);
    for (const auto& a : ch.ops())
      for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c)
          for (std::size_t p = 0; p < 3; ++p)
            for (std::size_t s = 0; s < 3; ++s) direct(r, c) += a(r, p) * h(p, s) * std::conj(a(c, s));
    EXPECT_LT(max_norm(out - direct), 1e-12);
    EXPECT_LT(hermiticity_residual(out), 1e-12);
  }
  EXPECT_THROW(apply_schrodinger(ch, ComplexMatrix::identity(2)), Error);
}

TEST(Heisenberg, Unital) {
  CounterRng rng(5);
  const auto ch = random_channel(4, 3, rng);
  EXPECT_LT(max_norm(apply_heisenberg(ch, ComplexMatrix::identity(4)) - ComplexMatrix::identity(4)), 1e-12);
}

TEST(Heisenberg, DualityWithSchrodinger) {
  CounterRng rng(6);
  const auto ch = random_channel(3, 3, rng);
  for (int i = 0; i < 20; ++i) {
    const ComplexMatrix rho = random_density(3, rng);
    const ComplexMatrix x = random_matrix(3, 3, rng);
    EXPECT_NEAR(std::abs(trace(apply_schrodinger(ch, rho) * x) - trace(rho * apply_heisenberg(ch, x))), 0.0, 1e-11);
  }
}

TEST(Heisenberg, RankTwoPovmSumsToOne) {
  CounterRng rng(7);
  const auto ch = random_rank2_channel(5, rng);
  const ComplexMatrix t1 = adjoint(ch.op(0)) * ch.op(0);
  const ComplexMatrix t2 = adjoint(ch.op(1)) * ch.op(1);
  EXPECT_LT(max_norm(t1 + t2 - ComplexMatrix::identity(5)), 1e-12);
  EXPECT_LT(max_norm(apply_heisenberg(ch, ComplexMatrix::identity(5)) - (t1 + t2)), 1e-12);
}

TEST(Stinespring, SingleUnitary) {
  CounterRng rng(8);
  const ComplexMatrix u = random_unitary(3, rng);
  const auto d = stinespring(unitary_channel(u));
  EXPECT_EQ(d.ancilla_dim, 1u);
  EXPECT_EQ(d.V, u);
}

TEST(Stinespring, ShapeAndIsometry) {
  CounterRng rng(9);
  const auto ch = random_channel(2, 2, rng);
  const auto d = stinespring(ch);
  EXPECT_EQ(d.V.rows(), 4u);
  EXPECT_EQ(d.V.cols(), 2u);
  EXPECT_LT(isometry_residual(d.V), 1e-12);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 2; ++c) EXPECT_EQ(d.V(i * 2 + r, c), ch.op(i)(r, c));
}

TEST(Stinespring, DilationReproducesHeisenbergOnMatrixUnits) {
  CounterRng rng(10);
  const auto ch = random_channel(3, 4, rng);
  const auto d = stinespring(ch);
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t k = 0; k < 3; ++k) {
      const ComplexMatrix e = matrix_unit(3, 3, j, k);
      EXPECT_LT(max_norm(dilation_heisenberg(d, e) - apply_heisenberg(ch, e)), 1e-12);
    }
}

TEST(Conjugate, UnitalOnIdentity) {
  CounterRng rng(11);
  const auto ch = random_channel(3, 4, rng);
  EXPECT_LT(max_norm(conjugate_apply(ch, ComplexMatrix::identity(4)) - ComplexMatrix::identity(3)), 1e-12);
}

TEST(Conjugate, DiagonalUnitsGivePovmElements) {
  CounterRng rng(12);
  const auto ch = random_channel(3, 3, rng);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_LT(max_norm(conjugate_apply(ch, matrix_unit(3, 3, i, i)) - adjoint(ch.op(i)) * ch.op(i)), 1e-14);
  }
}

TEST(Conjugate, OffDiagonalUnitsMatchDilationBlocks) {
  CounterRng rng(13);
  const auto ch = random_channel(3, 3, rng);
  const auto d = stinespring(ch);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      // Oracle: blocks cut directly out of V.
      ComplexMatrix bi(3, 3), bj(3, 3);
      for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) {
          bi(r, c) = d.V(i * 3 + r, c);
          bj(r, c) = d.V(j * 3 + r, c);
        }
      const ComplexMatrix y = matrix_unit(3, 3, i, j);
      EXPECT_LT(max_norm(conjugate_apply(ch, y) - adjoint(bi) * bj), 1e-13);
      EXPECT_LT(max_norm(dilation_conjugate(d, y) - adjoint(bi) * bj), 1e-13);
    }
  EXPECT_THROW(conjugate_apply(ch, ComplexMatrix::identity(2)), Error);
}

TEST(Rebase, IdentityKeepsOperators) {
  CounterRng rng(14);
  const auto ch = random_channel(2, 3, rng);
  const auto r = rebase_kraus(ch, ComplexMatrix::identity(3));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(r.op(i), ch.op(i));
}

TEST(Rebase, SwapReorders) {
  CounterRng rng(15);
  const auto ch = random_channel(2, 2, rng);
  const auto r = rebase_kraus(ch, ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}});
  EXPECT_EQ(r.op(0), ch.op(1));
  EXPECT_EQ(r.op(1), ch.op(0));
}

TEST(Rebase, RandomUnitaryKeepsChannelAction) {
  CounterRng rng(16);
  const auto ch = example_biased_channel();
  const ComplexMatrix u = random_unitary(3, rng);
  const auto r = rebase_kraus(ch, u);
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t k = 0; k < 4; ++k) {
      const ComplexMatrix e = matrix_unit(4, 4, j, k);
      EXPECT_LT(max_norm(apply_heisenberg(r, e) - apply_heisenberg(ch, e)), 1e-11);
    }
  EXPECT_GT(max_norm(r.op(0) - ch.op(0)), 1e-3);
}

TEST(Rebase, RejectsNonUnitary) {
  const auto ch = example_biased_channel();
  EXPECT_TRUE(throws_kind([&] { rebase_kraus(ch, 2.0 * ComplexMatrix::identity(3)); }, ErrorKind::NotUnitary));
}

TEST(RefChannel, SingleUnitary) {
  CounterRng rng(17);
  const ComplexMatrix u[] = {random_unitary(3, rng)};
  const double w[] = {1.0};
  const auto ch = ref_channel(u, w);
  EXPECT_EQ(ch.size(), 1u);
  EXPECT_LT(max_norm(ch.op(0) - u[0]), 1e-15);
}

TEST(RefChannel, BiAndTriUnitary) {
  CounterRng rng(18);
  const ComplexMatrix two[] = {random_unitary(4, rng), random_unitary(4, rng)};
  const double q2[] = {0.3, 0.7};
  EXPECT_EQ(ref_channel(two, q2).size(), 2u);
  const ComplexMatrix three[] = {ComplexMatrix::identity(6), random_unitary(6, rng), random_unitary(6, rng)};
  const double q3[] = {0.5, 0.25, 0.25};
  EXPECT_LT(ref_channel(three, q3).completeness_residual(), 1e-12);
}

TEST(RefChannel, Errors) {
  const ComplexMatrix u[] = {ComplexMatrix::identity(2), ComplexMatrix::identity(2)};
  const double bad_sum[] = {0.5, 0.6};
  const double negative[] = {1.5, -0.5};
  EXPECT_TRUE(throws_kind([&] { ref_channel(u, bad_sum); }, ErrorKind::BadWeights));
  EXPECT_TRUE(throws_kind([&] { ref_channel(u, negative); }, ErrorKind::BadWeights));
  const ComplexMatrix nu[] = {ComplexMatrix::identity(2), ComplexMatrix::diagonal({1.0, 2.0})};
  const double ok[] = {0.5, 0.5};
  EXPECT_TRUE(throws_kind([&] { ref_channel(nu, ok); }, ErrorKind::NotUnitary));
}

TEST(BiasedPermutation, TrivialRowIsIdentityChannel) {
  const auto ch = biased_permutation_channel({{1.0, 1.0, 1.0}}, {{0, 1, 2}});
  EXPECT_EQ(ch.op(0), ComplexMatrix::identity(3));
}

TEST(BiasedPermutation, WorkedExampleMatchesDisplayedMatrices) {
  const double x = 0.4, a = 0.05, b = 0.1, c = 0.04, d = 0.08;
  const double ap = 1 - a - c, bp = 1 - b - d, app = 1 - 2 * x + a + c, bpp = 1 - 2 * x + b + d;
  const auto ch = example_biased_channel();
  ComplexMatrix a1(4, 4), a2(4, 4), a3(4, 4);
  a1(0, 1) = std::sqrt(b);
  a1(1, 2) = std::sqrt(x - b);
  a1(2, 3) = std::sqrt(x - a);
  a1(3, 0) = std::sqrt(a);
  a2(0, 1) = std::sqrt(d);
  a2(1, 0) = std::sqrt(c);
  a2(2, 3) = std::sqrt(x - c);
  a2(3, 2) = std::sqrt(x - d);
  a3(0, 3) = std::sqrt(app);
  a3(1, 0) = std::sqrt(ap);
  a3(2, 1) = std::sqrt(bp);
  a3(3, 2) = std::sqrt(bpp);
  EXPECT_LT(max_norm(ch.op(0) - a1), 1e-15);
  EXPECT_LT(max_norm(ch.op(1) - a2), 1e-15);
  EXPECT_LT(max_norm(ch.op(2) - a3), 1e-15);
  EXPECT_LT(ch.completeness_residual(), 1e-15);
  for (const auto& p : povm_elements(ch)) {
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        if (i != j) { EXPECT_EQ(p(i, j), Complex{}); }
  }
}

TEST(BiasedPermutation, ColumnSumsOfExampleAreOne) {
  // Symbolic column sums: a + c + (1−a−c), b + d + (1−b−d), (x−b)+(x−d)+(1−2x+b+d), (x−a)+(x−c)+(1−2x+a+c).
  const auto s = example_weights();
  for (std::size_t m = 0; m < 4; ++m) EXPECT_NEAR(s[0][m] + s[1][m] + s[2][m], 1.0, 1e-15);
}

TEST(BiasedPermutation, Errors) {
  EXPECT_TRUE(throws_kind([] { biased_permutation_channel({{0.5, 1.0}}, {{0, 1}}); }, ErrorKind::NotStochastic));
  EXPECT_TRUE(throws_kind([] { biased_permutation_channel({{1.5, 1.0}, {-0.5, 0.0}}, {{0, 1}, {0, 1}}); }, ErrorKind::NotStochastic));
  EXPECT_TRUE(throws_kind([] { biased_permutation_channel({{1.0, 1.0}}, {{0, 0}}); }, ErrorKind::BadPermutation));
  EXPECT_TRUE(throws_kind([] { biased_permutation_channel({{1.0, 1.0}}, {{0, 1, 2}}); }, ErrorKind::BadPermutation));
  EXPECT_TRUE(throws_kind([] { biased_permutation_channel({{1.0, 1.0}}, {}); }, ErrorKind::BadPermutation));
}

TEST(BiasedPermutation, TinyNegativesClamped) {
  const auto ch = biased_permutation_channel({{1.0 + 1e-12, 1.0}, {-1e-12, 0.0}}, {{0, 1}, {1, 0}});
  EXPECT_EQ(ch.op(1)(0, 0), Complex{});
}

TEST(Instrument, LabelsValidated) {
  const auto ch = example_biased_channel();
  EXPECT_EQ(make_instrument(ch).labels, (std::vector<std::string>{"0", "1", "2"}));
  EXPECT_TRUE(throws_kind([&] { make_instrument(ch, {"a", "a", "b"}); }, ErrorKind::InvalidArgument));
  EXPECT_TRUE(throws_kind([&] { make_instrument(ch, {"a"}); }, ErrorKind::ShapeMismatch));
}

TEST(ProductChannel, KrausOrderingAndCompleteness) {
  CounterRng rng(19);
  const auto a = random_rank2_channel(2, rng);
  const auto b = random_channel(3, 3, rng);
  const auto p = product_channel(a, b);
  EXPECT_EQ(p.size(), 6u);
  EXPECT_EQ(p.dim(), 6u);
  EXPECT_EQ(p.op(4), tensor(a.op(1), b.op(1)));
  EXPECT_LT(p.completeness_residual(), 1e-12);
}

TEST(ChannelInvariants, RandomChannels) {
  CounterRng rng(20);
  for (int rep = 0; rep < 20; ++rep) {
    const auto ch = random_channel(2 + rep % 3, 1 + rep % 4, rng);
    const std::size_t n = ch.dim();
    EXPECT_LT(max_norm(apply_heisenberg(ch, ComplexMatrix::identity(n)) - ComplexMatrix::identity(n)), ch.tol());
    const ComplexMatrix rho = random_density(n, rng);
    EXPECT_LT(std::abs(trace(apply_schrodinger(ch, rho)) - 1.0), 10 * ch.tol());
    EXPECT_LT(isometry_residual(stinespring(ch).V), ch.tol());
    const ComplexMatrix u = random_unitary(ch.size(), rng);
    const auto r = rebase_kraus(ch, u);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const ComplexMatrix e = matrix_unit(n, n, j, k);
        EXPECT_LT(max_norm(apply_heisenberg(r, e) - apply_heisenberg(ch, e)), 10 * ch.tol());
      }
  }
}
