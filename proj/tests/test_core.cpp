#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "qik/qik.hpp"

using namespace qik;

namespace {

const complex I1{0.0, 1.0};

}  // namespace

TEST(Matrix, LiteralAndShape) {
  const ComplexMatrix a{{1.0, 2.0}, {3.0, 4.0}};
  EXPECT_EQ(a.rows(), 2u);
  EXPECT_EQ(a(1, 0), complex(3.0));
  EXPECT_THROW((ComplexMatrix{{1.0, 2.0}, {3.0}}), DimensionMismatch);
  EXPECT_THROW(ComplexMatrix(2, 2, std::vector<complex>(3)), DimensionMismatch);
}

TEST(Matrix, ProductsAndPowers) {
  const ComplexMatrix a{{1.0, I1}, {0.0, 2.0}};
  const ComplexMatrix a3 = mat_mul(mat_mul(a, a), a);
  EXPECT_EQ(mat_power(a, 3), a3);
  EXPECT_EQ(mat_power(a, 0), ComplexMatrix::identity(2));
  const auto table = power_table(a, 4);
  ASSERT_EQ(table.size(), 5u);
  EXPECT_EQ(table[3], a3);
  EXPECT_THROW(mat_mul(a, ComplexMatrix(3, 3)), DimensionMismatch);
}

TEST(Matrix, AdjointTransposeConjugate) {
  const ComplexMatrix a{{1.0, I1}, {2.0 * I1, 3.0}};
  EXPECT_EQ(adjoint(a)(0, 1), -2.0 * I1);
  EXPECT_EQ(transpose(a)(0, 1), 2.0 * I1);
  EXPECT_EQ(conjugate(a)(0, 1), -I1);
}

TEST(Matrix, KronAndBlocks) {
  const ComplexMatrix a{{1.0, 2.0}, {3.0, 4.0}};
  const ComplexMatrix b{{0.0, 1.0}, {1.0, 0.0}};
  const ComplexMatrix k = kron(a, b);
  EXPECT_EQ(k.rows(), 4u);
  EXPECT_EQ(k(0, 1), complex(1.0));
  EXPECT_EQ(k(3, 2), complex(4.0));
  EXPECT_EQ(mat_mul(kron(a, b), kron(b, a)), kron(mat_mul(a, b), mat_mul(b, a)));

  const ComplexMatrix d = block_diag(a, ComplexMatrix::identity(1));
  EXPECT_EQ(d(2, 2), complex(1.0));
  EXPECT_EQ(d(0, 2), complex(0.0));
  const ComplexMatrix f = from_blocks(a, ComplexMatrix(2, 1), ComplexMatrix(1, 2), ComplexMatrix::identity(1));
  EXPECT_EQ(f, d);
  EXPECT_EQ(block(d, 0, 0, 2, 2), a);
}

TEST(Gaussian, Arithmetic) {
  const GaussianInt a(1, 2), b(3, -1);
  EXPECT_EQ(a * b, GaussianInt(5, 5));
  EXPECT_EQ(conj(a), GaussianInt(1, -2));
  EXPECT_EQ(a - a, GaussianInt(0));
  EXPECT_TRUE((a - a).is_zero());
  // exceeds 64 bits without overflow
  GaussianInt big(1LL << 40, 0);
  big = big * big * big;
  EXPECT_EQ(big.real(), GaussianInt::integer(1) << 120);
}

TEST(Exact, Conversion) {
  const ComplexMatrix a{{1.0, -2.0 * I1}, {3.0, 0.0}};
  const auto e = exact::to_exact(a);
  ASSERT_TRUE(e.has_value());
  EXPECT_EQ((*e)(0, 1), GaussianInt(0, -2));
  EXPECT_EQ(exact::to_complex(*e), a);
  EXPECT_FALSE(exact::to_exact(ComplexMatrix{{0.5}}).has_value());
}

TEST(Linalg, Norms) {
  const ComplexMatrix a{{3.0, 0.0}, {0.0, -4.0 * I1}};
  EXPECT_NEAR(spectral_norm(a), 4.0, 1e-14);
  EXPECT_NEAR(frobenius_norm(a), 5.0, 1e-14);
  EXPECT_NEAR(smallest_singular_value(a), 3.0, 1e-14);
}

TEST(Linalg, IsZeroRequiresScaleAtLeastOne) {
  EXPECT_TRUE(is_zero(ComplexMatrix(2, 2), 1.0));
  EXPECT_THROW(is_zero(ComplexMatrix(2, 2), 0.5), std::invalid_argument);
}

TEST(Linalg, ColumnSpace) {
  const ComplexMatrix a{{1.0, 2.0, 0.0}, {2.0, 4.0, 0.0}, {0.0, 0.0, 0.0}};
  const auto cs = column_space_basis(a);
  EXPECT_EQ(cs.rank, 1u);
  EXPECT_EQ(cs.basis.cols(), 1u);
  EXPECT_EQ(cs.complement.cols(), 2u);
  EXPECT_LT(frobenius_norm(mat_mul(adjoint(cs.basis), cs.complement)), 1e-14);
  // projector onto the range reproduces A
  const ComplexMatrix p = mat_mul(cs.basis, adjoint(cs.basis));
  EXPECT_LT(frobenius_norm(mat_mul(p, a) - a), 1e-13);

  EXPECT_EQ(column_space_basis(ComplexMatrix(3, 3)).rank, 0u);
  EXPECT_EQ(column_space_basis(ComplexMatrix::identity(4)).rank, 4u);
}

TEST(Linalg, DefectiveEigenvaluesAreAccurate) {
  // Jordan block of size 4 at 1 + i: raw QR eigenvalues carry eps^(1/4) error
  ComplexMatrix j = ComplexMatrix::identity(4) * complex(1.0, 1.0);
  for (std::size_t i = 0; i + 1 < 4; ++i) j(i, i + 1) = 1.0;
  Rng rng(3);
  const ComplexMatrix u = random_unitary(rng, 4);
  const auto ev = eigenvalues(mat_mul(mat_mul(u, j), adjoint(u)));
  ASSERT_EQ(ev.size(), 4u);
  for (const auto& z : ev) EXPECT_LT(std::abs(z - complex(1.0, 1.0)), 1e-8);
}

TEST(Linalg, DistinctEigenvaluesKept) {
  const ComplexMatrix a{{2.0, 1.0}, {0.0, -1.0}};
  const auto ev = eigenvalues(a);
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_NEAR(ev[0].real(), -1.0, 1e-12);
  EXPECT_NEAR(ev[1].real(), 2.0, 1e-12);
  EXPECT_NEAR(spectral_radius(a), 2.0, 1e-12);
}

TEST(Tolerance, DefaultsAndEnvironment) {
  const TolerancePolicy t;
  EXPECT_EQ(t.rel_zero, 1e-9);
  EXPECT_EQ(t.rank_rel, 1e-10);
  EXPECT_EQ(t.eig_match, 1e-8);
  ::setenv("QIK_DEFAULT_TOL", "1e-7", 1);
  EXPECT_EQ(TolerancePolicy::from_environment().rel_zero, 1e-7);
  ::setenv("QIK_DEFAULT_TOL", "abc", 1);
  EXPECT_THROW(TolerancePolicy::from_environment(), std::invalid_argument);
  ::setenv("QIK_DEFAULT_TOL", "0.5", 1);
  EXPECT_THROW(TolerancePolicy::from_environment(), std::invalid_argument);
  ::unsetenv("QIK_DEFAULT_TOL");
  EXPECT_EQ(TolerancePolicy::from_environment(), TolerancePolicy{});
}

TEST(Conjugation, StandardSymbols) {
  const auto e = Conjugation::entrywise(3);
  const auto f = Conjugation::flip(3);
  const std::vector<complex> x{1.0, I1, 2.0 + I1};
  const auto fx = apply(f, std::span<const complex>(x));
  EXPECT_EQ(fx[0], 2.0 - I1);
  EXPECT_EQ(fx[1], -I1);
  EXPECT_EQ(fx[2], complex(1.0));
  // C^2 = I
  const auto ffx = apply(f, std::span<const complex>(fx));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(ffx[i], x[i]);
  EXPECT_EQ(apply(e, std::span<const complex>(x))[1], -I1);
}

TEST(Conjugation, RotationSymbolIsNotInvolutive) {
  const ComplexMatrix s{{0.0, 1.0}, {-1.0, 0.0}};
  try {
    Conjugation c(s);
    FAIL() << "accepted a symbol with S conj(S) = -I";
  } catch (const NotInvolutive& e) {
    EXPECT_NEAR(e.residual(), 2.0 * std::sqrt(2.0), 1e-12);
  }
}

TEST(Conjugation, NonUnitaryInvolutionRejected) {
  // S conj(S) = I but S is not unitary
  const ComplexMatrix s{{0.0, 2.0}, {0.5, 0.0}};
  EXPECT_THROW(Conjugation c(s), NotUnitary);
  EXPECT_THROW(Conjugation c(ComplexMatrix(2, 3)), DimensionMismatch);
}

TEST(Conjugation, ExactValidation) {
  EXPECT_NO_THROW(ExactConjugation::flip(4));
  GaussianMatrix s(2, 2);
  s(0, 1) = GaussianInt(1);
  s(1, 0) = GaussianInt(-1);
  EXPECT_THROW(ExactConjugation c(s), NotInvolutive);
}

TEST(Conjugation, ConjSimilarityMatchesDefinition) {
  Rng rng(11);
  const Conjugation c = random_conjugation(rng, 4);
  const ComplexMatrix t = gaussian_matrix(rng, 4, 4);
  const ComplexMatrix ctc = conj_similarity(c, t);
  const auto x = gaussian_vector(rng, 4);
  const auto cx = apply(c, std::span<const complex>(x));
  const auto tcx = apply(t, std::span<const complex>(cx));
  const auto direct = apply(c, std::span<const complex>(tcx));
  const auto viaMatrix = apply(ctc, std::span<const complex>(x));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_LT(std::abs(direct[i] - viaMatrix[i]), 1e-12);
}

TEST(Conjugation, SumsAndTensors) {
  const auto c = direct_sum(Conjugation::flip(2), Conjugation::entrywise(1));
  EXPECT_EQ(c.dim(), 3u);
  const auto t = tensor(Conjugation::flip(2), Conjugation::flip(3));
  EXPECT_EQ(t.symbol(), Conjugation::flip(6).symbol());
}

TEST(Conjugation, SplitAlongInvariantSubspace) {
  // span(e1 + e3) is mapped into itself by flip3
  ComplexMatrix q(3, 1);
  q(0, 0) = q(2, 0) = 1.0 / std::sqrt(2.0);
  const auto split = split_along(Conjugation::flip(3), q);
  EXPECT_EQ(split.first.dim(), 1u);
  EXPECT_EQ(split.second.dim(), 2u);
  EXPECT_LT(split.off_block_residual, 1e-15);

  ComplexMatrix e1(3, 1);
  e1(0, 0) = 1.0;
  try {
    split_along(Conjugation::flip(3), e1);
    FAIL() << "flip3 does not preserve span(e1)";
  } catch (const NotReducing& e) {
    EXPECT_GT(e.residual(), 0.1);
  }
}

TEST(Random, DeterministicAndUnitary) {
  Rng a(42), b(42);
  EXPECT_EQ(gaussian_matrix(a, 3, 3), gaussian_matrix(b, 3, 3));
  EXPECT_NE(trial_seed(1, 0), trial_seed(1, 1));
  const ComplexMatrix u = random_unitary(a, 5);
  EXPECT_LT(frobenius_norm(mat_mul(adjoint(u), u) - ComplexMatrix::identity(5)), 1e-14);
  const ComplexMatrix g = complex_rotation({0.7, 0.3});
  EXPECT_LT(frobenius_norm(mat_mul(transpose(g), g) - ComplexMatrix::identity(2)), 1e-14);
  const Frame f = random_frame(a, 4);
  EXPECT_LT(Conjugation::involution_residual(f.conjugation.symbol()), 1e-13);
}
