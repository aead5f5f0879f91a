#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "qik/errors.hpp"
#include "qik/matrix.hpp"
#include "qik/tolerance.hpp"

namespace qik {

using complex = std::complex<double>;

inline Eigen::MatrixXcd to_eigen(const ComplexMatrix& a) {
  Eigen::MatrixXcd e(static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j);
  return e;
}

inline ComplexMatrix from_eigen(const Eigen::MatrixXcd& e) {
  ComplexMatrix a(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j)
      a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = e(i, j);
  return a;
}

inline bool all_finite(const ComplexMatrix& a) {
  return std::all_of(a.data().begin(), a.data().end(),
                     [](const complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

inline void require_square(const ComplexMatrix& a, const char* what) {
  if (!a.is_square()) throw DimensionMismatch(std::string(what) + ": matrix " + a.shape() + " is not square");
}

inline double frobenius_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (const auto& z : a.data()) s += std::norm(z);
  return std::sqrt(s);
}

/// Singular values in non-increasing order.
inline std::vector<double> singular_values(const ComplexMatrix& a) {
  if (a.empty()) return {};
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(a));
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

inline double spectral_norm(const ComplexMatrix& a) {
  auto s = singular_values(a);
  return s.empty() ? 0.0 : s.front();
}

inline double smallest_singular_value(const ComplexMatrix& a) {
  auto s = singular_values(a);
  return s.empty() ? 0.0 : s.back();
}

struct Norms {
  double frobenius = 0.0;
  double spectral = 0.0;
};

inline Norms norms(const ComplexMatrix& a) { return {frobenius_norm(a), spectral_norm(a)}; }

/// true iff ||a||_F <= rel_zero * scale. Callers pass a scale that already
/// absorbs the norm growth of whatever produced `a`.
inline bool is_zero(const ComplexMatrix& a, double scale, const TolerancePolicy& tol = {}) {
  if (!(scale >= 1.0)) throw std::invalid_argument("is_zero: scale must be >= 1");
  return frobenius_norm(a) <= tol.rel_zero * scale;
}

struct ColumnSpace {
  ComplexMatrix basis;       // rows x rank, orthonormal columns spanning R(A)
  ComplexMatrix complement;  // rows x (rows - rank), orthonormal basis of N(A*)
  std::size_t rank = 0;
};

/// Orthonormal bases of R(A) and its orthogonal complement from a full SVD.
/// Singular values at or below rank_rel * sigma_max * max(rows, cols) count as zero.
inline ColumnSpace column_space_basis(const ComplexMatrix& a, const TolerancePolicy& tol = {}) {
  const std::size_t n = a.rows();
  ColumnSpace out;
  if (n == 0) return out;
  if (a.cols() == 0) {
    out.basis = ComplexMatrix(n, 0);
    out.complement = ComplexMatrix::identity(n);
    return out;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(a), Eigen::ComputeFullU);
  const auto& s = svd.singularValues();
  const double threshold =
      tol.rank_rel * (s.size() ? s(0) : 0.0) * static_cast<double>(std::max(a.rows(), a.cols()));
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > threshold) ++r;
  const ComplexMatrix u = from_eigen(svd.matrixU());
  out.rank = r;
  out.basis = block(u, 0, 0, n, r);
  out.complement = block(u, 0, r, n, n - r);
  return out;
}

namespace detail {

// Replace each tight cluster of computed eigenvalues by its mean when the mean
// is itself an acceptable eigenvalue. Eigenvalues of a Jordan block of size k
// scatter like eps^(1/k) under roundoff, while their mean moves only like eps.
inline void consolidate_clusters(const ComplexMatrix& a, std::vector<complex>& ev,
                                 const TolerancePolicy& tol) {
  const std::size_t n = ev.size();
  if (n < 2) return;
  const double anorm = spectral_norm(a);
  const double radius = 1e-3 * (1.0 + anorm);
  const double accept = tol.eig_match * (1.0 + anorm);

  // single-linkage clustering
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(ev[i] - ev[j]) <= radius) parent[find(i)] = find(j);

  std::vector<std::vector<std::size_t>> groups(n);
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);

  const ComplexMatrix I = ComplexMatrix::identity(a.rows());
  for (const auto& g : groups) {
    if (g.size() < 2) continue;
    complex mean{};
    for (auto i : g) mean += ev[i];
    mean /= static_cast<double>(g.size());
    if (smallest_singular_value(a - mean * I) <= accept) {
      for (auto i : g) ev[i] = mean;
    }
  }
}

}  // namespace detail

/// Eigenvalues with algebraic multiplicity. Each returned value lambda satisfies
/// sigma_min(A - lambda I) <= eig_match * (1 + ||A||_2).
inline std::vector<complex> eigenvalues(const ComplexMatrix& a, const TolerancePolicy& tol = {}) {
  require_square(a, "eigenvalues");
  if (a.rows() == 0) return {};
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(to_eigen(a), /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NonConvergence("eigenvalue iteration did not converge for a " + a.shape() + " matrix");
  }
  const auto& v = solver.eigenvalues();
  std::vector<complex> ev(v.data(), v.data() + v.size());
  detail::consolidate_clusters(a, ev, tol);
  std::sort(ev.begin(), ev.end(), [](const complex& x, const complex& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return ev;
}

inline double spectral_radius(const std::vector<complex>& ev) {
  double r = 0.0;
  for (const auto& z : ev) r = std::max(r, std::abs(z));
  return r;
}

inline double spectral_radius(const ComplexMatrix& a, const TolerancePolicy& tol = {}) {
  return spectral_radius(eigenvalues(a, tol));
}

}  // namespace qik
