#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <vector>

#include "qik/conjugation.hpp"
#include "qik/defects.hpp"
#include "qik/report.hpp"

namespace qik {

struct MomentSequence {
  std::vector<complex> values;  // a_0 .. a_J
  std::string origin = "custom";

  std::size_t size() const { return values.size(); }
  double max_abs() const {
    double mx = 0.0;
    for (const auto& v : values) mx = std::max(mx, std::abs(v));
    return mx;
  }
};

/// sum_{0<=k<=m} (-1)^k binom(m,k) a_{rk+j}
inline complex binomial_diff(const MomentSequence& a, int m, int r, int j) {
  if (m < 0 || r < 1 || j < 0) throw std::invalid_argument("binomial_diff: need m >= 0, r >= 1, j >= 0");
  const auto last = static_cast<std::size_t>(r) * static_cast<std::size_t>(m) + static_cast<std::size_t>(j);
  if (last >= a.size()) {
    throw IndexOutOfRange("binomial_diff: index " + std::to_string(last) + " beyond sequence of length " +
                          std::to_string(a.size()));
  }
  complex sum{};
  for (int k = 0; k <= m; ++k) {
    const double coeff = static_cast<double>((k % 2 == 0 ? 1 : -1) * binomial(m, k));
    sum += coeff * a.values[static_cast<std::size_t>(r * k + j)];
  }
  return sum;
}

/// max_{0<=j<=J} |binomial_diff(a, m, r, j)|, relative to the largest |a_i|
/// among the terms it reads (i <= r m + J); 0 for a zero window.
inline double recurrence_residual(const MomentSequence& a, int m, int r, int J) {
  double worst = 0.0;
  for (int j = 0; j <= J; ++j) worst = std::max(worst, std::abs(binomial_diff(a, m, r, j)));
  const auto last = static_cast<std::size_t>(r) * static_cast<std::size_t>(m) + static_cast<std::size_t>(std::max(J, 0));
  double scale = 0.0;
  for (std::size_t i = 0; i <= last && i < a.size(); ++i) scale = std::max(scale, std::abs(a.values[i]));
  return scale > 0.0 ? worst / scale : worst;
}

inline bool satisfies_recurrence(const MomentSequence& a, int m, int r, int J,
                                 const TolerancePolicy& tol = {}) {
  return recurrence_residual(a, m, r, J) <= tol.rel_zero;
}

/// Given step-r order-m and step-s order-l recurrences on j <= J, check the
/// step-gcd(r,s) order-min(m,l) recurrence. The order-q step-p form with the
/// roles swapped is recorded as `swapped_form_residual` without being asserted.
inline VerificationReport gcd_min_reduction(const MomentSequence& a, std::pair<int, int> first,
                                            std::pair<int, int> second, int J,
                                            const TolerancePolicy& tol = {}) {
  const auto [m, r] = first;
  const auto [l, s] = second;
  if (m < 1 || l < 1 || r < 1 || s < 1 || J < 0) {
    throw std::invalid_argument("gcd_min_reduction: orders and steps must be positive");
  }
  const int q = std::gcd(r, s);
  const int p = std::min(m, l);

  VerificationReport rep;
  rep.theorem_id = "lem22";
  rep.dims = {a.size()};
  rep.norms = {a.max_abs()};
  rep.measurements["gcd_step"] = q;
  rep.measurements["min_order"] = p;
  rep.require("order " + std::to_string(m) + " step " + std::to_string(r), recurrence_residual(a, m, r, J), tol);
  rep.require("order " + std::to_string(l) + " step " + std::to_string(s), recurrence_residual(a, l, s, J), tol);
  rep.conclusion = {"order min(m,l) step gcd(r,s) recurrence", p, 0, recurrence_residual(a, p, q, J), false};
  if (static_cast<std::size_t>(p * q) < a.size()) {
    double scale = 0.0;
    for (std::size_t i = 0; i <= static_cast<std::size_t>(p * q); ++i) scale = std::max(scale, std::abs(a.values[i]));
    const double lit = std::abs(binomial_diff(a, q, p, 0));
    rep.measurements["swapped_form_residual"] = scale > 0.0 ? lit / scale : lit;
  }
  settle(rep, tol);
  return rep;
}

/// a_j = <C T^j x | T^j x>, inner product conjugate-linear in the second slot.
inline MomentSequence moments(const ComplexMatrix& t, const Conjugation& c, std::span<const complex> x, int J) {
  require_square(t, "moments");
  if (t.rows() != c.dim() || x.size() != t.rows()) throw DimensionMismatch("moments: dimension mismatch");
  if (J < 0) throw std::invalid_argument("moments: J must be >= 0");
  MomentSequence seq;
  seq.origin = "operator moments";
  std::vector<complex> y(x.begin(), x.end());
  for (int j = 0; j <= J; ++j) {
    if (j > 0) y = apply(t, std::span<const complex>(y));
    const auto cy = apply(c, std::span<const complex>(y));
    complex a{};
    for (std::size_t i = 0; i < y.size(); ++i) a += cy[i] * std::conj(y[i]);
    seq.values.push_back(a);
  }
  return seq;
}

/// a_j = sum_i coeffs[i] j^i for j = 0..length-1.
inline MomentSequence polynomial_sequence(const std::vector<complex>& coeffs, std::size_t length) {
  MomentSequence seq;
  seq.origin = "polynomial";
  for (std::size_t j = 0; j < length; ++j) {
    complex v{};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * static_cast<double>(j) + *it;
    seq.values.push_back(v);
  }
  return seq;
}

}  // namespace qik
