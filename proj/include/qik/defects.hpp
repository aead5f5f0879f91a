#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qik/conjugation.hpp"
#include "qik/exact.hpp"
#include "qik/linalg.hpp"
#include "qik/matrix.hpp"
#include "qik/tolerance.hpp"

namespace qik {

/// Largest order accepted by the classification grid; binom(12, 6) = 924
/// already costs about three digits of the double mantissa.
inline constexpr int kMaxOrder = 12;

inline long long binomial(int m, int k) {
  if (k < 0 || k > m) return 0;
  k = std::min(k, m - k);
  long long b = 1;
  for (int i = 1; i <= k; ++i) b = b * (m - k + i) / i;
  return b;
}

namespace detail {

inline void require_order(int m, const char* what) {
  if (m < 1) throw std::invalid_argument(std::string(what) + ": order m must be >= 1");
}
inline void require_quasi(int n, const char* what) {
  if (n < 1) throw std::invalid_argument(std::string(what) + ": quasi order n must be >= 1");
}

// A_j = T*^j T^j, or T*^j (C T^j C) when a conjugation is given, for j = 0..jmax.
template <class S>
std::vector<Matrix<S>> moment_operators(const Matrix<S>& t, const BasicConjugation<S>* c,
                                        int jmax) {
  if (!t.is_square()) throw DimensionMismatch("defect of non-square operator " + t.shape());
  if (c != nullptr && c->dim() != t.rows()) {
    throw DimensionMismatch("operator " + t.shape() + " vs conjugation of dim " +
                            std::to_string(c->dim()));
  }
  const auto powers = power_table(t, static_cast<unsigned>(jmax));
  std::vector<Matrix<S>> out;
  out.reserve(powers.size());
  for (const auto& p : powers) {
    out.push_back(mat_mul(adjoint(p), c ? conj_similarity(*c, p) : p));
  }
  return out;
}

// sum_k (-1)^k binom(m,k) A_{m-k}
template <class S>
Matrix<S> alternating_sum(const std::vector<Matrix<S>>& a, int m) {
  Matrix<S> sum(a.front().rows(), a.front().cols());
  for (int k = 0; k <= m; ++k) {
    const long long coeff = (k % 2 == 0 ? 1 : -1) * binomial(m, k);
    sum += a[static_cast<std::size_t>(m - k)] * scalar_traits<S>::from_int(coeff);
  }
  return sum;
}

// T*^n X T^n
template <class S>
Matrix<S> compress(const Matrix<S>& t, const Matrix<S>& x, int n) {
  const auto tn = mat_power(t, static_cast<unsigned>(n));
  return mat_mul(mat_mul(adjoint(tn), x), tn);
}

template <class S>
Matrix<S> lambda_matrix(const Matrix<S>& t, const BasicConjugation<S>* c, int m, int n) {
  auto a = moment_operators(t, c, m);
  auto defect = alternating_sum(a, m);
  return n > 0 ? compress(t, defect, n) : defect;
}

}  // namespace detail

/// A computed defect together with the scale used to decide whether it vanishes.
struct DefectOperator {
  ComplexMatrix matrix;
  double scale = 1.0;
  int m = 1;
  int n = 0;
  bool with_conjugation = false;

  double residual() const { return frobenius_norm(matrix) / scale; }
  bool vanishes(const TolerancePolicy& tol = {}) const { return is_zero(matrix, scale, tol); }
};

/// max(1, ||T||_2)^(2m+2n) * dim
inline double defect_scale(const ComplexMatrix& t, int m, int n) {
  const double base = std::max(1.0, spectral_norm(t));
  return std::pow(base, 2.0 * (m + n)) * static_cast<double>(std::max<std::size_t>(t.rows(), 1));
}

/// sum_k (-1)^k binom(m,k) T*^(m-k) T^(m-k); zero iff T is an m-isometry.
inline DefectOperator iso_defect(const ComplexMatrix& t, int m) {
  detail::require_order(m, "iso_defect");
  return {detail::lambda_matrix<complex>(t, nullptr, m, 0), defect_scale(t, m, 0), m, 0, false};
}

inline DefectOperator quasi_iso_defect(const ComplexMatrix& t, int m, int n) {
  detail::require_order(m, "quasi_iso_defect");
  detail::require_quasi(n, "quasi_iso_defect");
  return {detail::lambda_matrix<complex>(t, nullptr, m, n), defect_scale(t, m, n), m, n, false};
}

/// Lambda_m(T) = sum_k (-1)^k binom(m,k) T*^(m-k) C T^(m-k) C.
inline DefectOperator lambda(const ComplexMatrix& t, const Conjugation& c, int m) {
  detail::require_order(m, "lambda");
  return {detail::lambda_matrix(t, &c, m, 0), defect_scale(t, m, 0), m, 0, true};
}

inline DefectOperator quasi_lambda(const ComplexMatrix& t, const Conjugation& c, int m, int n) {
  detail::require_order(m, "quasi_lambda");
  detail::require_quasi(n, "quasi_lambda");
  return {detail::lambda_matrix(t, &c, m, n), defect_scale(t, m, n), m, n, true};
}

/// Lambda_m via Lambda_0 = I and Lambda_{k+1} = T* Lambda_k (CTC) - Lambda_k.
inline DefectOperator lambda_by_recurrence(const ComplexMatrix& t, const Conjugation& c, int m) {
  detail::require_order(m, "lambda_by_recurrence");
  require_square(t, "lambda_by_recurrence");
  const ComplexMatrix ctc = conj_similarity(c, t);
  const ComplexMatrix tstar = adjoint(t);
  ComplexMatrix current = ComplexMatrix::identity(t.rows());
  for (int k = 0; k < m; ++k) current = mat_mul(mat_mul(tstar, current), ctc) - current;
  return {std::move(current), defect_scale(t, m, 0), m, 0, true};
}

/// Defect for the class (m, n); n == 0 selects the plain class. Without a
/// conjugation this is the m-isometry family.
inline DefectOperator class_defect(const ComplexMatrix& t, const Conjugation* c, int m, int n) {
  if (c) return n == 0 ? lambda(t, *c, m) : quasi_lambda(t, *c, m, n);
  return n == 0 ? iso_defect(t, m) : quasi_iso_defect(t, m, n);
}

inline bool in_class(const ComplexMatrix& t, const Conjugation* c, int m, int n,
                     const TolerancePolicy& tol = {}) {
  return class_defect(t, c, m, n).vanishes(tol);
}

namespace exact {

/// Exact defect for the class (m, n) over the Gaussian integers.
inline GaussianMatrix class_defect(const GaussianMatrix& t, const ExactConjugation* c, int m,
                                   int n) {
  qik::detail::require_order(m, "exact defect");
  if (n < 0) throw std::invalid_argument("exact defect: quasi order must be >= 0");
  return qik::detail::lambda_matrix(t, c, m, n);
}

inline GaussianMatrix lambda(const GaussianMatrix& t, const ExactConjugation& c, int m) {
  return class_defect(t, &c, m, 0);
}

inline GaussianMatrix quasi_lambda(const GaussianMatrix& t, const ExactConjugation& c, int m, int n) {
  qik::detail::require_quasi(n, "exact quasi_lambda");
  return class_defect(t, &c, m, n);
}

/// Exact verdict when T and the conjugation symbol have Gaussian-integer
/// entries, nullopt otherwise.
inline std::optional<bool> in_class(const ComplexMatrix& t, const Conjugation* c, int m, int n) {
  auto te = to_exact(t);
  if (!te) return std::nullopt;
  std::optional<ExactConjugation> ce;
  if (c) {
    ce = to_exact(*c);
    if (!ce) return std::nullopt;
  }
  return is_exact_zero(class_defect(*te, ce ? &*ce : nullptr, m, n));
}

}  // namespace exact

struct GridCell {
  int m = 1;
  int n = 0;
  double residual = 0.0;
  bool verdict = false;
};

struct ClassificationReport {
  int m_max = 1;
  int n_max = 0;
  bool with_conjugation = false;
  bool exact = false;
  std::vector<GridCell> grid;  // m-major: (1,0), (1,1), ..., (m_max, n_max)
  std::vector<std::pair<int, int>> minimal_pairs;
  bool commutes_with_ctc = false;  // T (CTC) = (CTC) T, or T*T = TT* without a conjugation
  bool monotone_in_m = true;
  bool monotone_in_n = true;

  const GridCell& at(int m, int n) const {
    if (m < 1 || m > m_max || n < 0 || n > n_max) throw IndexOutOfRange("grid cell out of range");
    return grid[static_cast<std::size_t>((m - 1) * (n_max + 1) + n)];
  }

  /// Smallest m with a true verdict at quasi order n.
  std::optional<int> minimal_order(int n) const {
    for (int m = 1; m <= m_max; ++m)
      if (at(m, n).verdict) return m;
    return std::nullopt;
  }
};

namespace detail {

inline void finish_classification(ClassificationReport& rep) {
  for (int m = 1; m <= rep.m_max; ++m) {
    for (int n = 0; n <= rep.n_max; ++n) {
      const auto& cell = rep.at(m, n);
      if (!cell.verdict) continue;
      if (m < rep.m_max && !rep.at(m + 1, n).verdict) rep.monotone_in_m = false;
      if (n < rep.n_max && !rep.at(m, n + 1).verdict) rep.monotone_in_n = false;
      bool dominated = false;
      for (const auto& other : rep.grid) {
        if (other.verdict && other.m <= m && other.n <= n && (other.m != m || other.n != n)) {
          dominated = true;
          break;
        }
      }
      if (!dominated) rep.minimal_pairs.emplace_back(m, n);
    }
  }
}

inline void check_grid_bounds(int m_max, int n_max) {
  if (m_max < 1 || m_max > kMaxOrder || n_max < 0 || n_max > kMaxOrder) {
    throw std::invalid_argument("classify: need 1 <= m_max <= 12 and 0 <= n_max <= 12");
  }
}

}  // namespace detail

/// Residuals and verdicts for every (m, n) in [1, m_max] x [0, n_max].
inline ClassificationReport classify(const ComplexMatrix& t, const Conjugation* c, int m_max,
                                     int n_max, const TolerancePolicy& tol = {}) {
  detail::check_grid_bounds(m_max, n_max);
  ClassificationReport rep;
  rep.m_max = m_max;
  rep.n_max = n_max;
  rep.with_conjugation = c != nullptr;

  const auto moments = detail::moment_operators<complex>(t, c, m_max);
  const auto powers = power_table(t, static_cast<unsigned>(n_max));
  for (int m = 1; m <= m_max; ++m) {
    const ComplexMatrix plain = detail::alternating_sum(moments, m);
    for (int n = 0; n <= n_max; ++n) {
      const auto& tn = powers[static_cast<std::size_t>(n)];
      DefectOperator d{n == 0 ? plain : mat_mul(mat_mul(adjoint(tn), plain), tn), defect_scale(t, m, n),
                       m, n, c != nullptr};
      rep.grid.push_back({m, n, d.residual(), d.vanishes(tol)});
    }
  }
  const ComplexMatrix partner = c ? conj_similarity(*c, t) : adjoint(t);
  const double cscale = std::pow(std::max(1.0, spectral_norm(t)), 2.0) * static_cast<double>(t.rows());
  rep.commutes_with_ctc = is_zero(commutator(t, partner), std::max(cscale, 1.0), tol);
  detail::finish_classification(rep);
  return rep;
}

inline ClassificationReport classify(const ComplexMatrix& t, const Conjugation& c, int m_max,
                                     int n_max, const TolerancePolicy& tol = {}) {
  return classify(t, &c, m_max, n_max, tol);
}

/// Same grid with verdicts decided in exact Gaussian-integer arithmetic.
/// Throws std::invalid_argument when an entry is not a Gaussian integer.
inline ClassificationReport classify_exact(const ComplexMatrix& t, const Conjugation* c, int m_max,
                                           int n_max) {
  detail::check_grid_bounds(m_max, n_max);
  auto te = exact::to_exact(t);
  if (!te) throw std::invalid_argument("classify_exact: operator entries are not Gaussian integers");
  std::optional<ExactConjugation> ce;
  if (c) {
    ce = exact::to_exact(*c);
    if (!ce) throw std::invalid_argument("classify_exact: conjugation symbol is not integral");
  }
  const ExactConjugation* cp = ce ? &*ce : nullptr;

  ClassificationReport rep;
  rep.m_max = m_max;
  rep.n_max = n_max;
  rep.with_conjugation = c != nullptr;
  rep.exact = true;
  const auto moments = detail::moment_operators(*te, cp, m_max);
  const auto powers = power_table(*te, static_cast<unsigned>(n_max));
  for (int m = 1; m <= m_max; ++m) {
    const GaussianMatrix plain = detail::alternating_sum(moments, m);
    for (int n = 0; n <= n_max; ++n) {
      const auto& tn = powers[static_cast<std::size_t>(n)];
      const GaussianMatrix d = n == 0 ? plain : mat_mul(mat_mul(adjoint(tn), plain), tn);
      rep.grid.push_back({m, n, frobenius_norm(exact::to_complex(d)) / defect_scale(t, m, n),
                          is_exact_zero(d)});
    }
  }
  const GaussianMatrix partner = cp ? conj_similarity(*cp, *te) : adjoint(*te);
  rep.commutes_with_ctc = is_exact_zero(commutator(*te, partner));
  detail::finish_classification(rep);
  return rep;
}

/// Finite-horizon proxy for power boundedness: max_{1<=k<=K} ||T^k||_2 <= B
/// and r(T) <= 1 + eig_match.
inline bool is_power_bounded(const ComplexMatrix& t, int horizon = 64, double bound = 10.0,
                             const TolerancePolicy& tol = {}) {
  if (horizon < 1) throw std::invalid_argument("is_power_bounded: horizon must be >= 1");
  require_square(t, "is_power_bounded");
  ComplexMatrix p = t;
  for (int k = 1; k <= horizon; ++k) {
    if (spectral_norm(p) > bound) return false;
    if (k < horizon) p = mat_mul(p, t);
  }
  return spectral_radius(t, tol) <= 1.0 + tol.eig_match;
}

/// r(A) = ||A||_2 within eig_match * (1 + ||A||_2).
inline bool is_normaloid(const ComplexMatrix& a, const TolerancePolicy& tol = {}) {
  require_square(a, "is_normaloid");
  const double norm = spectral_norm(a);
  return std::abs(spectral_radius(a, tol) - norm) <= tol.eig_match * (1.0 + norm);
}

}  // namespace qik
