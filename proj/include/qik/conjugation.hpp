#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "qik/errors.hpp"
#include "qik/linalg.hpp"
#include "qik/matrix.hpp"

namespace qik {

/// Antilinear involution x -> S * conj(x), stored by its symbol S.
///
/// C^2 = I holds iff S * conj(S) = I, and C is isometric iff S is unitary;
/// together these force S to be symmetric. The floating instantiation checks
/// both within 1e-12 * dim, the exact (Gaussian integer) one checks them exactly.
template <class Scalar>
class BasicConjugation {
 public:
  using matrix_type = Matrix<Scalar>;

  BasicConjugation() = default;

  explicit BasicConjugation(matrix_type symbol) : symbol_(std::move(symbol)) { validate(); }

  static BasicConjugation entrywise(std::size_t dim) {
    return BasicConjugation(matrix_type::identity(dim));
  }

  /// Antidiagonal permutation: (x_1, ..., x_d) -> (conj x_d, ..., conj x_1).
  static BasicConjugation flip(std::size_t dim) {
    matrix_type s(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) s(i, dim - 1 - i) = scalar_traits<Scalar>::from_int(1);
    return BasicConjugation(std::move(s));
  }

  std::size_t dim() const noexcept { return symbol_.rows(); }
  const matrix_type& symbol() const noexcept { return symbol_; }

  /// ||S conj(S) - I||_F, zero for a genuine conjugation.
  static double involution_residual(const ComplexMatrix& s) {
    return frobenius_norm(mat_mul(s, conjugate(s)) - ComplexMatrix::identity(s.rows()));
  }

 private:
  void validate() const {
    if (!symbol_.is_square()) {
      throw DimensionMismatch("conjugation symbol must be square, got " + symbol_.shape());
    }
    const std::size_t n = symbol_.rows();
    if constexpr (std::is_same_v<Scalar, std::complex<double>>) {
      if (!all_finite(symbol_)) throw std::invalid_argument("conjugation symbol has non-finite entries");
      const double limit = 1e-12 * static_cast<double>(n);
      const double inv = involution_residual(symbol_);
      if (inv > limit) {
        throw NotInvolutive("symbol S has S*conj(S) != I, ||S conj(S) - I||_F = " + std::to_string(inv),
                            inv);
      }
      const double uni = frobenius_norm(mat_mul(adjoint(symbol_), symbol_) - ComplexMatrix::identity(n));
      if (uni > limit) {
        throw NotUnitary("symbol S is not unitary, ||S*S - I||_F = " + std::to_string(uni), uni);
      }
    } else {
      const auto I = matrix_type::identity(n);
      if (!(mat_mul(symbol_, conjugate(symbol_)) == I)) {
        throw NotInvolutive("exact symbol S has S*conj(S) != I", 1.0);
      }
      if (!(mat_mul(adjoint(symbol_), symbol_) == I)) {
        throw NotUnitary("exact symbol S is not unitary", 1.0);
      }
    }
  }

  matrix_type symbol_;
};

using Conjugation = BasicConjugation<std::complex<double>>;
using ExactConjugation = BasicConjugation<GaussianInt>;

inline Conjugation make_conjugation(ComplexMatrix symbol) { return Conjugation(std::move(symbol)); }

template <class Scalar>
std::vector<Scalar> apply(const BasicConjugation<Scalar>& c, std::span<const Scalar> x) {
  if (x.size() != c.dim()) throw DimensionMismatch("conjugation apply: vector length mismatch");
  std::vector<Scalar> xc(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) xc[i] = scalar_traits<Scalar>::conj(x[i]);
  return apply(c.symbol(), std::span<const Scalar>(xc));
}

/// Matrix of the linear map x -> C T C x, namely S conj(T) conj(S).
template <class Scalar>
Matrix<Scalar> conj_similarity(const BasicConjugation<Scalar>& c, const Matrix<Scalar>& t) {
  if (t.rows() != c.dim() || t.cols() != c.dim()) {
    throw DimensionMismatch("conj_similarity: operator " + t.shape() + " vs conjugation of dim " +
                            std::to_string(c.dim()));
  }
  return mat_mul(mat_mul(c.symbol(), conjugate(t)), conjugate(c.symbol()));
}

template <class Scalar>
BasicConjugation<Scalar> direct_sum(const BasicConjugation<Scalar>& c1,
                                    const BasicConjugation<Scalar>& c2) {
  return BasicConjugation<Scalar>(block_diag(c1.symbol(), c2.symbol()));
}

template <class Scalar>
BasicConjugation<Scalar> tensor(const BasicConjugation<Scalar>& c, const BasicConjugation<Scalar>& d) {
  return BasicConjugation<Scalar>(kron(c.symbol(), d.symbol()));
}

/// Conjugation expressed in the coordinates of a unitary change of basis U:
/// the symbol becomes U* S conj(U).
inline ComplexMatrix symbol_in_frame(const Conjugation& c, const ComplexMatrix& u) {
  return mat_mul(mat_mul(adjoint(u), c.symbol()), conjugate(u));
}

struct SplitConjugation {
  Conjugation first;     // on span(Q), in Q coordinates
  Conjugation second;    // on span(Q)^perp, in complement coordinates
  ComplexMatrix frame;   // unitary [Q, Q_perp]
  double off_block_residual = 0.0;
};

/// Relative off-block size above which a conjugation is not considered to split.
inline constexpr double kReducingTolerance = 1e-10;

/// Restrict C to M = span(Q) and M^perp. Throws NotReducing unless C maps M
/// into M (and hence M^perp into M^perp) within kReducingTolerance.
/// The complement basis is taken from `complement` when given, so that the
/// second restriction lives in the caller's coordinates.
inline SplitConjugation split_along(const Conjugation& c, const ComplexMatrix& q,
                                    const ComplexMatrix* complement = nullptr) {
  const std::size_t d = c.dim();
  if (q.rows() != d) throw DimensionMismatch("split_along: basis rows do not match conjugation dim");
  const std::size_t r = q.cols();
  ComplexMatrix comp = complement ? *complement : column_space_basis(q).complement;
  if (comp.rows() != d || comp.cols() != d - r) {
    throw DimensionMismatch("split_along: complement basis has shape " + comp.shape());
  }
  ComplexMatrix u = from_blocks(q, comp, ComplexMatrix(0, r), ComplexMatrix(0, d - r));
  const double orth = frobenius_norm(mat_mul(adjoint(u), u) - ComplexMatrix::identity(d));
  if (orth > 1e-10 * static_cast<double>(std::max<std::size_t>(d, 1))) {
    throw std::invalid_argument("split_along: basis is not orthonormal");
  }
  ComplexMatrix s = symbol_in_frame(c, u);

  const double off = std::hypot(frobenius_norm(block(s, 0, r, r, d - r)),
                                frobenius_norm(block(s, r, 0, d - r, r)));
  const double rel = d == 0 ? 0.0 : off / frobenius_norm(s);
  if (rel > kReducingTolerance) {
    throw NotReducing("conjugation does not split along the subspace (relative off-block " +
                          std::to_string(rel) + ")",
                      rel);
  }
  auto symmetrized = [](const ComplexMatrix& b) {
    ComplexMatrix sym = b + transpose(b);
    sym *= complex{0.5, 0.0};
    return sym;
  };
  return {Conjugation(symmetrized(block(s, 0, 0, r, r))),
          Conjugation(symmetrized(block(s, r, r, d - r, d - r))), std::move(u), rel};
}

}  // namespace qik
