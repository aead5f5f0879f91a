#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qik/qik.hpp"

using namespace qik;

TEST(Sequences, BinomialDiff) {
  const auto a = polynomial_sequence({0.0, 0.0, 1.0}, 10);  // j^2
  EXPECT_EQ(a.values[3], complex(9.0));
  // second difference of j^2 is 2
  EXPECT_EQ(binomial_diff(a, 2, 1, 0), complex(2.0));
  EXPECT_EQ(binomial_diff(a, 3, 1, 4), complex(0.0));
  // step 2: a_4 - 2 a_2 + a_0 = 8
  EXPECT_EQ(binomial_diff(a, 2, 2, 0), complex(8.0));
  EXPECT_THROW(binomial_diff(a, 3, 4, 0), IndexOutOfRange);
  EXPECT_THROW(binomial_diff(a, 1, 0, 0), std::invalid_argument);
}

TEST(Sequences, PolynomialsSatisfyTheirOrder) {
  Rng rng(2);
  for (int p = 1; p <= 6; ++p) {
    std::vector<complex> coeffs;
    for (int i = 0; i < p; ++i) coeffs.push_back(rng.complex_normal());
    const auto a = polynomial_sequence(coeffs, 40);
    for (int r = 1; r <= 4; ++r) {
      EXPECT_TRUE(satisfies_recurrence(a, p, r, 5)) << "p " << p << " r " << r;
      if (p > 1) EXPECT_FALSE(satisfies_recurrence(a, p - 1, r, 5)) << "p " << p << " r " << r;
    }
  }
}

TEST(Sequences, GeometricFailsOrderOne) {
  MomentSequence a;
  for (int j = 0; j < 20; ++j) a.values.emplace_back(std::ldexp(1.0, j));
  for (int r = 1; r <= 4; ++r) EXPECT_FALSE(satisfies_recurrence(a, 1, r, 3));
  EXPECT_FALSE(satisfies_recurrence(a, 4, 1, 3));
}

TEST(Sequences, ResidualIsRelativeToTheTermsRead) {
  // a long tail of large terms must not hide an early failure
  MomentSequence a;
  for (int j = 0; j < 60; ++j) a.values.emplace_back(std::ldexp(1.0, j));
  EXPECT_NEAR(recurrence_residual(a, 1, 1, 2), 0.5, 1e-15);
}

TEST(Sequences, ZeroSequence) {
  MomentSequence a;
  a.values.assign(8, complex{});
  EXPECT_EQ(recurrence_residual(a, 1, 1, 3), 0.0);
}

TEST(Sequences, MomentsMatchDirectFormula) {
  Rng rng(4);
  const ComplexMatrix t = gaussian_matrix(rng, 4, 4) * complex(0.5, 0.0);
  const Conjugation c = random_conjugation(rng, 4);
  const auto x = gaussian_vector(rng, 4);
  const auto seq = moments(t, c, x, 6);
  const auto ref = oracle::moments(oracle::from(t), oracle::from(c.symbol()), x, 7);
  ASSERT_EQ(seq.size(), 7u);
  for (std::size_t j = 0; j < 7; ++j) EXPECT_LT(std::abs(seq.values[j] - ref[j]), 1e-12);
  EXPECT_THROW(moments(t, c, x, -1), std::invalid_argument);
}

TEST(Sequences, MomentsOfClassMemberSatisfyRecurrence) {
  // Jordan block at 1 of size 2 is a (3, entrywise)-isometry
  const ComplexMatrix t = gen_scalar_plus_nilpotent(1.0, 2, 2);
  const auto c = Conjugation::entrywise(2);
  const ComplexVector x{complex(0.3, 0.1), complex(-0.2, 0.7)};
  const auto seq = moments(t, c, x, 12);
  EXPECT_TRUE(satisfies_recurrence(seq, 3, 1, 9));
}

TEST(Sequences, GcdMinReduction) {
  const auto a = polynomial_sequence({1.0, 2.0, -1.0}, 30);  // degree 2
  const auto rep = gcd_min_reduction(a, {3, 2}, {4, 3}, 6);
  EXPECT_EQ(rep.outcome, Outcome::Pass);
  EXPECT_EQ(rep.measurements.at("gcd_step"), 1.0);
  EXPECT_EQ(rep.measurements.at("min_order"), 3.0);
  EXPECT_TRUE(rep.measurements.contains("swapped_form_residual"));

  // hypotheses fail for 2^j, so the report is inconclusive
  MomentSequence g;
  for (int j = 0; j < 30; ++j) g.values.emplace_back(std::ldexp(1.0, j));
  EXPECT_EQ(gcd_min_reduction(g, {1, 2}, {1, 3}, 4).outcome, Outcome::Inconclusive);
  EXPECT_THROW(gcd_min_reduction(a, {0, 2}, {1, 3}, 4), std::invalid_argument);
}
