#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qik/qik.hpp"

using namespace qik;

namespace {

GaussianMatrix gauss(const ComplexMatrix& a) { return *qik::exact::to_exact(a); }

ComplexMatrix ints(std::initializer_list<std::initializer_list<double>> rows) {
  ComplexMatrix m(rows.size(), rows.begin()->size());
  std::size_t i = 0;
  for (const auto& r : rows) {
    std::size_t j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

oracle::Mat<long long> to_ll(const ComplexMatrix& a) {
  oracle::Mat<long long> m(a.rows(), std::vector<long long>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m[i][j] = static_cast<long long>(a(i, j).real());
  return m;
}

ComplexMatrix from_ll(const oracle::Mat<long long>& m) {
  ComplexMatrix a(m.size(), m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) a(i, j) = static_cast<double>(m[i][j]);
  return a;
}

}  // namespace

TEST(Binomial, SmallValues) {
  EXPECT_EQ(binomial(5, 2), 10);
  EXPECT_EQ(binomial(12, 6), 924);
  EXPECT_EQ(binomial(3, 4), 0);
}

TEST(Defects, TwoByTwoFlipGolden) {
  const ComplexMatrix t = ints({{-1, -1}, {3, 2}});
  const auto c = ExactConjugation::flip(2);
  const auto te = gauss(t);
  EXPECT_EQ(mat_power(te, 3), -GaussianMatrix::identity(2));
  EXPECT_EQ(exact::to_complex(exact::quasi_lambda(te, c, 1, 1)), ints({{-30, -18}, {-16, -10}}));
  EXPECT_EQ(exact::to_complex(exact::lambda(te, c, 1)), ints({{-6, -6}, {-4, -6}}));
  // T^3 = -I is a (1,C)-isometry, so every quasi class holds for it
  EXPECT_TRUE(exact::class_defect(mat_power(te, 3), &c, 1, 1) == GaussianMatrix(2, 2));

  const auto s = to_ll(ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}});
  EXPECT_EQ(from_ll(oracle::lambda(to_ll(t), &s, 1, 1)), ints({{-30, -18}, {-16, -10}}));
}

TEST(Defects, UpperTriangularUnipotentGolden) {
  const ComplexMatrix t = ComplexMatrix::identity(3) + ComplexMatrix::unit(3, 0, 2);
  const auto te = gauss(t);
  const auto flip = ExactConjugation::flip(3);
  const auto ent = ExactConjugation::entrywise(3);
  EXPECT_EQ(exact::lambda(te, flip, 1), GaussianMatrix::unit(3, 2, 0) * GaussianInt(2));
  EXPECT_TRUE(is_exact_zero(exact::lambda(te, flip, 2)));
  EXPECT_EQ(exact::lambda(te, ent, 2), GaussianMatrix::unit(3, 2, 2) * GaussianInt(2));
  EXPECT_TRUE(is_exact_zero(exact::lambda(te, ent, 3)));

  const auto cf = Conjugation::flip(3);
  const auto ce = Conjugation::entrywise(3);
  const auto rep_flip = classify_exact(t, &cf, 4, 2);
  ASSERT_EQ(rep_flip.minimal_pairs.size(), 1u);
  EXPECT_EQ(rep_flip.minimal_pairs[0], std::make_pair(2, 0));
  const auto rep_ent = classify_exact(t, &ce, 4, 2);
  ASSERT_EQ(rep_ent.minimal_pairs.size(), 1u);
  EXPECT_EQ(rep_ent.minimal_pairs[0], std::make_pair(3, 0));
}

TEST(Defects, AgreesWithOracleOnRandomInputs) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed);
    const std::size_t d = static_cast<std::size_t>(rng.integer(1, 5));
    const ComplexMatrix t = gaussian_matrix(rng, d, d) * complex(0.6, 0.0);
    const Conjugation c = random_conjugation(rng, d);
    const auto tt = oracle::from(t);
    const auto ss = oracle::from(c.symbol());
    for (int m = 1; m <= 4; ++m) {
      for (int n = 0; n <= 2; ++n) {
        const auto d1 = class_defect(t, &c, m, n);
        EXPECT_LE(oracle::distance(d1.matrix, oracle::lambda(tt, &ss, m, n)), 1e-12 * d1.scale)
            << "seed " << seed << " m " << m << " n " << n;
        const auto d0 = class_defect(t, nullptr, m, n);
        EXPECT_LE(oracle::distance(d0.matrix, oracle::lambda<std::complex<double>>(tt, nullptr, m, n)),
                  1e-12 * d0.scale);
      }
    }
  }
}

TEST(Defects, RecurrenceMatchesDirectSum) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed + 100);
    const std::size_t d = static_cast<std::size_t>(rng.integer(1, 6));
    const ComplexMatrix t = gaussian_matrix(rng, d, d);
    const Conjugation c = random_conjugation(rng, d);
    for (int m = 1; m <= 5; ++m) {
      const auto a = lambda(t, c, m);
      const auto b = lambda_by_recurrence(t, c, m);
      EXPECT_LE(frobenius_norm(a.matrix - b.matrix), 1e-9 * a.scale);
    }
  }
}

TEST(Defects, ExactMatchesFloatingOnIntegerInputs) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexMatrix t(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) t(i, j) = complex(rng.integer(-2, 2), rng.integer(-1, 1));
    const auto c = Conjugation::flip(3);
    const auto ce = *exact::to_exact(c);
    for (int m = 1; m <= 3; ++m) {
      const auto fl = lambda(t, c, m);
      EXPECT_LE(frobenius_norm(fl.matrix - exact::to_complex(exact::lambda(gauss(t), ce, m))), 1e-9 * fl.scale);
    }
  }
}

TEST(Defects, UnitaryIsOneIsometry) {
  Rng rng(8);
  const ComplexMatrix u = random_real_orthogonal(rng, 4);
  EXPECT_TRUE(in_class(u, nullptr, 1, 0));
  // real orthogonal operators commute with entrywise conjugation
  const auto c = Conjugation::entrywise(4);
  EXPECT_TRUE(in_class(u, &c, 1, 0));
  EXPECT_FALSE(in_class(u * complex(2.0, 0.0), &c, 1, 0));
}

TEST(Defects, InputValidation) {
  const ComplexMatrix t = ComplexMatrix::identity(2);
  const auto c = Conjugation::flip(3);
  EXPECT_THROW(lambda(t, c, 1), DimensionMismatch);
  EXPECT_THROW(lambda(t, Conjugation::flip(2), 0), std::invalid_argument);
  EXPECT_THROW(quasi_lambda(t, Conjugation::flip(2), 1, 0), std::invalid_argument);
  EXPECT_THROW(iso_defect(ComplexMatrix(2, 3), 1), DimensionMismatch);
  EXPECT_THROW(classify(t, nullptr, 13, 0), std::invalid_argument);
  EXPECT_THROW(classify_exact(t * complex(0.5, 0.0), nullptr, 2, 0), std::invalid_argument);
}

TEST(Classify, GridAndFlags) {
  const ComplexMatrix t = ComplexMatrix::identity(3) + ComplexMatrix::unit(3, 0, 2);
  const auto c = Conjugation::flip(3);
  const auto rep = classify(t, &c, 4, 2);
  EXPECT_EQ(rep.grid.size(), 12u);
  EXPECT_FALSE(rep.at(1, 0).verdict);
  EXPECT_TRUE(rep.at(2, 0).verdict);
  EXPECT_TRUE(rep.at(4, 2).verdict);
  EXPECT_EQ(rep.minimal_order(1), 2);
  EXPECT_TRUE(rep.monotone_in_m);
  EXPECT_TRUE(rep.monotone_in_n);
  EXPECT_THROW(rep.at(5, 0), IndexOutOfRange);
  const auto ex = classify_exact(t, &c, 4, 2);
  EXPECT_TRUE(ex.exact);
  for (std::size_t i = 0; i < rep.grid.size(); ++i) EXPECT_EQ(rep.grid[i].verdict, ex.grid[i].verdict);
}

TEST(Classify, WithoutConjugationUsesIsometryFamily) {
  // Jordan block at 1 of size 2 is a strict 3-isometry
  const ComplexMatrix t = gen_scalar_plus_nilpotent(1.0, 2, 2);
  const auto rep = classify(t, nullptr, 4, 0);
  EXPECT_EQ(rep.minimal_order(0), 3);
  EXPECT_FALSE(rep.commutes_with_ctc);
}

TEST(Classify, TwoByTwoExampleNeverInAnyClass) {
  const ComplexMatrix t = ints({{-1, -1}, {3, 2}});
  const auto c = Conjugation::flip(2);
  const auto rep = classify_exact(t, &c, 4, 3);
  EXPECT_TRUE(rep.minimal_pairs.empty());
}

TEST(PowerBounded, Proxies) {
  EXPECT_TRUE(is_power_bounded(ComplexMatrix::identity(3)));
  EXPECT_FALSE(is_power_bounded(gen_scalar_plus_nilpotent(1.0, 2, 2)));
  EXPECT_FALSE(is_power_bounded(ComplexMatrix::identity(2) * complex(1.1, 0.0)));
  EXPECT_TRUE(is_normaloid(ComplexMatrix{{2.0, 0.0}, {0.0, 1.0}}));
  EXPECT_FALSE(is_normaloid(ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}));
}
