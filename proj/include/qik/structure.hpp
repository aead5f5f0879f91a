#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "qik/conjugation.hpp"
#include "qik/defects.hpp"
#include "qik/linalg.hpp"
#include "qik/report.hpp"

namespace qik {

/// T written as [[T1, T2], [0, T3]] on closure(R(T^n)) + N(T*^n).
struct Decomposition {
  ComplexMatrix basis;  // unitary; the first `rank` columns span R(T^n)
  std::size_t rank = 0;
  ComplexMatrix t1, t2, t3;
  double residual_lower_left = 0.0;  // ||lower-left block of Q* T Q||_F

  std::size_t dim() const { return basis.rows(); }
  bool dense_range() const { return rank == dim(); }
  ComplexMatrix range_basis() const { return block(basis, 0, 0, dim(), rank); }
  ComplexMatrix kernel_basis() const { return block(basis, 0, rank, dim(), dim() - rank); }
};

inline Decomposition decompose(const ComplexMatrix& t, int n, const TolerancePolicy& tol = {}) {
  require_square(t, "decompose");
  if (n < 1) throw std::invalid_argument("decompose: n must be >= 1");
  const std::size_t d = t.rows();
  const auto cs = column_space_basis(mat_power(t, static_cast<unsigned>(n)), tol);

  Decomposition dec;
  dec.rank = cs.rank;
  dec.basis = from_blocks(cs.basis, cs.complement, ComplexMatrix(0, cs.rank), ComplexMatrix(0, d - cs.rank));
  const ComplexMatrix b = mat_mul(mat_mul(adjoint(dec.basis), t), dec.basis);
  const std::size_t r = dec.rank;
  dec.t1 = block(b, 0, 0, r, r);
  dec.t2 = block(b, 0, r, r, d - r);
  dec.t3 = block(b, r, r, d - r, d - r);
  dec.residual_lower_left = frobenius_norm(block(b, r, 0, d - r, r));
  return dec;
}

struct SpectrumReport {
  std::vector<complex> eigenvalues;
  double spectral_radius = 0.0;
};

inline SpectrumReport spectrum_report(const ComplexMatrix& t, const TolerancePolicy& tol = {}) {
  SpectrumReport rep;
  rep.eigenvalues = eigenvalues(t, tol);
  rep.spectral_radius = qik::spectral_radius(rep.eigenvalues);
  return rep;
}

/// Greedy pairing of two eigenvalue multisets, closest pair first. Returns the
/// largest distance used, or infinity when the sizes differ.
inline double match_spectra(std::vector<complex> a, std::vector<complex> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  while (!a.empty()) {
    std::size_t bi = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        if (double dist = std::abs(a[i] - b[j]); dist < best) {
          best = dist;
          bi = i;
          bj = j;
        }
    worst = std::max(worst, best);
    a.erase(a.begin() + static_cast<std::ptrdiff_t>(bi));
    b.erase(b.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  return worst;
}

/// Block upper-triangular operator [[T1, T2], [0, T3]] on the direct sum
/// carrying C1 + C2. Requires T1 to be (m, C1)-isometric and T3^n = 0.
inline ComplexMatrix assemble(const ComplexMatrix& t1, const ComplexMatrix& t2, const ComplexMatrix& t3,
                              const Conjugation& c1, const Conjugation& c2, int m, int n,
                              const TolerancePolicy& tol = {}) {
  if (n < 1) throw std::invalid_argument("assemble: n must be >= 1");
  if (t1.rows() != c1.dim() || t3.rows() != c2.dim()) {
    throw DimensionMismatch("assemble: block sizes do not match the conjugations");
  }
  if (t1.rows() > 0 && !lambda(t1, c1, m).vanishes(tol)) {
    throw HypothesisFailed("assemble: T1 is not (" + std::to_string(m) + ",C1)-isometric");
  }
  if (t3.rows() > 0) {
    const double scale = std::pow(std::max(1.0, spectral_norm(t3)), n) * static_cast<double>(t3.rows());
    if (!is_zero(mat_power(t3, static_cast<unsigned>(n)), scale, tol)) {
      throw HypothesisFailed("assemble: T3^" + std::to_string(n) + " is not zero");
    }
  }
  return from_blocks(t1, t2, ComplexMatrix(t3.rows(), t1.cols()), t3);
}

/// Forward direction of the structure theorem: from an n-quasi-(m,C)-isometry
/// whose conjugation splits along R(T^n), check that T1 is (m, C1)-isometric,
/// that T3^n = 0 and that sigma(T) = sigma(T1) + {0, ..., 0}.
inline VerificationReport verify_structure_forward(const ComplexMatrix& t, const Conjugation& c, int m,
                                                   int n, const TolerancePolicy& tol = {}) {
  const auto premise = quasi_lambda(t, c, m, n);
  if (!premise.vanishes(tol)) {
    throw HypothesisFailed("T is not " + std::to_string(n) + "-quasi-(" + std::to_string(m) +
                           ",C)-isometric (residual " + std::to_string(premise.residual()) + ")");
  }
  const Decomposition dec = decompose(t, n, tol);
  const ComplexMatrix kernel = dec.kernel_basis();
  const SplitConjugation split = split_along(c, dec.range_basis(), &kernel);

  VerificationReport rep;
  rep.theorem_id = "th21";
  rep.variant = "forward";
  rep.dims = {t.rows()};
  rep.norms = {spectral_norm(t)};
  rep.require("quasi_lambda(T,C,m,n) = 0", premise.residual(), tol);
  rep.require_flag("C splits along R(T^n)", true);
  rep.measurements["rank"] = static_cast<double>(dec.rank);
  rep.measurements["conjugation_off_block"] = split.off_block_residual;

  const double tnorm = spectral_norm(t);
  const double lower_left = dec.residual_lower_left / std::max(frobenius_norm(t), 1.0);
  const double t1_res = dec.rank > 0 ? lambda(dec.t1, split.first, m).residual() : 0.0;
  const double t3_res =
      dec.dense_range()
          ? 0.0
          : frobenius_norm(mat_power(dec.t3, static_cast<unsigned>(n))) /
                (std::pow(std::max(1.0, tnorm), n) * static_cast<double>(t.rows()));

  std::vector<complex> expected = dec.rank > 0 ? eigenvalues(dec.t1, tol) : std::vector<complex>{};
  expected.resize(t.rows(), complex{});
  const double spec_dist = match_spectra(eigenvalues(t, tol), expected);

  rep.measurements["lower_left_relative"] = lower_left;
  rep.measurements["lambda_T1_residual"] = t1_res;
  rep.measurements["T3_power_residual"] = t3_res;
  rep.measurements["spectrum_max_distance"] = spec_dist;

  rep.conclusion = {"T1 is (m,C1)-isometric, T3^n = 0, sigma(T) = sigma(T1) u {0}", m, 0,
                    std::max(t1_res, t3_res), false};
  settle(rep, tol);
  if (rep.outcome == Outcome::Pass && spec_dist > tol.eig_match) {
    rep.rechecked_4x = true;
    if (spec_dist > 4.0 * tol.eig_match) {
      rep.conclusion.pass = false;
      rep.outcome = Outcome::CounterExample;
    }
  }
  return rep;
}

}  // namespace qik
