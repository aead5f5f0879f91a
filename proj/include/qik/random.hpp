#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

#include "qik/conjugation.hpp"
#include "qik/matrix.hpp"

namespace qik {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of trial `index` in a suite seeded with `base`; trials are independent
/// of each other and of evaluation order.
inline std::uint64_t trial_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(base ^ splitmix64(index));
}

/// Deterministic generator. Only the raw mt19937_64 stream (fully specified by
/// the standard) is used, so identical seeds give identical instances.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) {
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool coin() { return (engine_() >> 63) != 0; }
  double sign() { return coin() ? 1.0 : -1.0; }

  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  std::complex<double> complex_normal() { return {normal() * M_SQRT1_2, normal() * M_SQRT1_2}; }

  /// Modulus in [lo, hi], uniformly random phase.
  std::complex<double> complex_in_annulus(double lo, double hi) {
    return std::polar(uniform(lo, hi), uniform(0.0, 2.0 * std::numbers::pi));
  }

 private:
  std::mt19937_64 engine_;
};

inline ComplexMatrix gaussian_matrix(Rng& rng, std::size_t rows, std::size_t cols, bool real = false) {
  ComplexMatrix g(rows, cols);
  for (auto& z : g.data()) z = real ? std::complex<double>(rng.normal(), 0.0) : rng.complex_normal();
  return g;
}

inline ComplexVector gaussian_vector(Rng& rng, std::size_t n) {
  ComplexVector v(n);
  for (auto& z : v) z = rng.complex_normal();
  return v;
}

namespace detail {

// Orthonormalize columns in place (modified Gram-Schmidt, two passes).
inline void orthonormalize_columns(ComplexMatrix& a) {
  const std::size_t n = a.rows();
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        std::complex<double> dot{};
        for (std::size_t i = 0; i < n; ++i) dot += std::conj(a(i, k)) * a(i, j);
        for (std::size_t i = 0; i < n; ++i) a(i, j) -= dot * a(i, k);
      }
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(a(i, j));
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) a(i, j) /= norm;
  }
}

}  // namespace detail

inline ComplexMatrix random_unitary(Rng& rng, std::size_t n) {
  ComplexMatrix u = gaussian_matrix(rng, n, n);
  detail::orthonormalize_columns(u);
  return u;
}

inline ComplexMatrix random_real_orthogonal(Rng& rng, std::size_t n) {
  ComplexMatrix q = gaussian_matrix(rng, n, n, /*real=*/true);
  detail::orthonormalize_columns(q);
  return q;
}

/// [[cos z, sin z], [-sin z, cos z]]; satisfies G^T G = I for every complex z.
inline ComplexMatrix complex_rotation(std::complex<double> z) {
  const auto c = std::cos(z), s = std::sin(z);
  return ComplexMatrix{{c, s}, {-s, c}};
}

/// A unitary change of frame V together with the conjugation x -> V V^T conj(x).
/// Operators built in entrywise-conjugation coordinates keep every relation
/// involving C when mapped through X -> V X V*.
struct Frame {
  ComplexMatrix v;
  Conjugation conjugation;

  ComplexMatrix to_world(const ComplexMatrix& x) const { return mat_mul(mat_mul(v, x), adjoint(v)); }
};

inline Frame random_frame(Rng& rng, std::size_t n) {
  ComplexMatrix v = random_unitary(rng, n);
  ComplexMatrix s = mat_mul(v, transpose(v));
  // symmetrize away the last-bit asymmetry of the product
  s = (s + transpose(s)) * std::complex<double>(0.5, 0.0);
  return {std::move(v), Conjugation(std::move(s))};
}

inline Conjugation random_conjugation(Rng& rng, std::size_t n) { return random_frame(rng, n).conjugation; }

}  // namespace qik
