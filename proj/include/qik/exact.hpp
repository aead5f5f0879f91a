#pragma once

#include <cmath>
#include <optional>

#include "qik/conjugation.hpp"
#include "qik/gaussian.hpp"
#include "qik/matrix.hpp"

namespace qik::exact {

/// Gaussian-integer copy of `a` when every component is an integer below 2^53.
inline std::optional<GaussianMatrix> to_exact(const ComplexMatrix& a) {
  constexpr double kLimit = 9007199254740992.0;  // 2^53
  GaussianMatrix g(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const auto z = a(i, j);
      for (double part : {z.real(), z.imag()}) {
        if (!(std::abs(part) < kLimit) || part != std::trunc(part)) return std::nullopt;
      }
      g(i, j) = GaussianInt(GaussianInt::integer(static_cast<long long>(z.real())),
                            GaussianInt::integer(static_cast<long long>(z.imag())));
    }
  }
  return g;
}

inline std::optional<ExactConjugation> to_exact(const Conjugation& c) {
  auto s = to_exact(c.symbol());
  if (!s) return std::nullopt;
  try {
    return ExactConjugation(std::move(*s));
  } catch (const Error&) {
    return std::nullopt;
  }
}

inline ComplexMatrix to_complex(const GaussianMatrix& g) {
  ComplexMatrix a(g.rows(), g.cols());
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) a(i, j) = g(i, j).to_complex();
  return a;
}

}  // namespace qik::exact
