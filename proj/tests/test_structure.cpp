#include <gtest/gtest.h>

#include "qik/qik.hpp"

using namespace qik;

TEST(Decompose, NilpotentPartSplitsOff) {
  // T = diag(2, J_2(0)) has R(T) spanned by e1 and e2
  ComplexMatrix t(3, 3);
  t(0, 0) = 2.0;
  t(1, 2) = 1.0;
  const auto dec = decompose(t, 1);
  EXPECT_EQ(dec.rank, 2u);
  EXPECT_FALSE(dec.dense_range());
  EXPECT_LT(dec.residual_lower_left, 1e-14);
  EXPECT_EQ(dec.range_basis().cols(), 2u);
  EXPECT_EQ(dec.kernel_basis().cols(), 1u);
  const auto dec2 = decompose(t, 2);
  EXPECT_EQ(dec2.rank, 1u);
  EXPECT_LT(frobenius_norm(mat_power(dec2.t3, 2)), 1e-14);
  EXPECT_THROW(decompose(t, 0), std::invalid_argument);
}

TEST(Decompose, InvertibleHasDenseRange) {
  const auto dec = decompose(ComplexMatrix{{1.0, 2.0}, {0.0, 3.0}}, 2);
  EXPECT_TRUE(dec.dense_range());
  EXPECT_EQ(dec.kernel_basis().cols(), 0u);
}

TEST(Structure, MatchSpectra) {
  EXPECT_EQ(match_spectra({1.0, 2.0}, {2.0, 1.0}), 0.0);
  EXPECT_NEAR(match_spectra({1.0, 2.0}, {1.0, 2.5}), 0.5, 1e-15);
  EXPECT_TRUE(std::isinf(match_spectra({1.0}, {1.0, 2.0})));
}

TEST(Structure, AssembleChecksHypotheses) {
  const auto c1 = Conjugation::entrywise(1);
  const auto c2 = Conjugation::entrywise(2);
  const ComplexMatrix t1{{1.0}};
  const ComplexMatrix t3{{0.0, 1.0}, {0.0, 0.0}};
  const ComplexMatrix t2{{1.0, 1.0}};
  const ComplexMatrix t = assemble(t1, t2, t3, c1, c2, 1, 2);
  EXPECT_EQ(t.rows(), 3u);
  EXPECT_THROW(assemble(t1, t2, t3, c1, c2, 1, 1), HypothesisFailed);
  EXPECT_THROW(assemble(t1 * complex(2.0, 0.0), t2, t3, c1, c2, 1, 2), HypothesisFailed);
  // the assembled operator is 2-quasi-(1,C)
  const auto c = direct_sum(c1, c2);
  EXPECT_TRUE(in_class(t, &c, 1, 2));
  EXPECT_FALSE(in_class(t, &c, 1, 1));
}

TEST(Structure, ForwardRoundtripOnModelInstances) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const auto r = static_cast<std::size_t>(rng.integer(1, 4));
    const auto d3 = static_cast<std::size_t>(rng.integer(1, 2));
    const int m = rng.integer(1, 3);
    const int n = rng.integer(1, 3);
    const auto a = model::assembled(rng, r, d3, m, n, rng.coin());
    const Frame f = random_frame(rng, r + d3);
    const ComplexMatrix t = f.to_world(a.op);
    const auto rep = verify_structure_forward(t, f.conjugation, a.m, a.n);
    EXPECT_EQ(rep.outcome, Outcome::Pass) << "seed " << seed;
    EXPECT_EQ(rep.measurements.at("rank"), static_cast<double>(r));
    EXPECT_LE(rep.measurements.at("spectrum_max_distance"), 1e-8);
  }
}

TEST(Structure, ForwardRejectsFalsePremise) {
  const ComplexMatrix t{{2.0, 0.0}, {0.0, 1.0}};
  EXPECT_THROW(verify_structure_forward(t, Conjugation::entrywise(2), 1, 1), HypothesisFailed);
}

TEST(Structure, ForwardOnNilpotent) {
  // T^2 = 0: R(T^2) is trivial and T3 is all of T
  const ComplexMatrix t{{0.0, 1.0}, {0.0, 0.0}};
  const auto rep = verify_structure_forward(t, Conjugation::flip(2), 1, 2);
  EXPECT_EQ(rep.outcome, Outcome::Pass);
  EXPECT_EQ(rep.measurements.at("rank"), 0.0);
}

TEST(Spectrum, Report) {
  const auto rep = spectrum_report(ComplexMatrix{{-1.0, -1.0}, {3.0, 2.0}});
  ASSERT_EQ(rep.eigenvalues.size(), 2u);
  // eigenvalues of T are primitive sixth roots of unity
  for (const auto& z : rep.eigenvalues) EXPECT_NEAR(std::abs(z), 1.0, 1e-12);
  EXPECT_NEAR(rep.spectral_radius, 1.0, 1e-12);
}
