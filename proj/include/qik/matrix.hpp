#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qik/errors.hpp"
#include "qik/gaussian.hpp"

namespace qik {

// Scalar policy shared by the floating and exact paths.
template <class T>
struct scalar_traits;

template <>
struct scalar_traits<std::complex<double>> {
  using value_type = std::complex<double>;
  static value_type from_int(long long k) { return {static_cast<double>(k), 0.0}; }
  static value_type conj(const value_type& x) { return std::conj(x); }
  static bool is_zero(const value_type& x) { return x == value_type{}; }
};

template <>
struct scalar_traits<GaussianInt> {
  using value_type = GaussianInt;
  static value_type from_int(long long k) { return GaussianInt(k); }
  static value_type conj(const value_type& x) { return qik::conj(x); }
  static bool is_zero(const value_type& x) { return x.is_zero(); }
};

/// Dense row-major matrix over a scalar ring.
template <class T>
class Matrix {
 public:
  using value_type = T;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw DimensionMismatch("matrix data has " + std::to_string(data_.size()) +
                              " entries, expected " + std::to_string(rows_ * cols_));
    }
  }
  Matrix(std::initializer_list<std::initializer_list<T>> rows) : rows_(rows.size()) {
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw DimensionMismatch("ragged matrix literal");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix I(n, n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = scalar_traits<T>::from_int(1);
    return I;
  }

  /// Matrix unit E_{ij} (zero-based indices).
  static Matrix unit(std::size_t n, std::size_t i, std::size_t j) {
    Matrix E(n, n);
    E(i, j) = scalar_traits<T>::from_int(1);
    return E;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  Matrix& operator+=(const Matrix& o) {
    require_same_shape(o, "+");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    require_same_shape(o, "-");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(const T& s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const T& s) { return a *= s; }
  friend Matrix operator*(const T& s, Matrix a) { return a *= s; }
  friend Matrix operator-(Matrix a) {
    for (auto& x : a.data_) x = -x;
    return a;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) { return mat_mul(a, b); }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

 private:
  void require_same_shape(const Matrix& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw DimensionMismatch(std::string("shape mismatch in ") + op + ": " + shape() + " vs " +
                              o.shape());
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using ComplexMatrix = Matrix<std::complex<double>>;
using GaussianMatrix = Matrix<GaussianInt>;
using ComplexVector = std::vector<std::complex<double>>;

template <class T>
Matrix<T> mat_mul(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("mat_mul: " + a.shape() + " times " + b.shape());
  }
  Matrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T& aik = a(i, k);
      if (scalar_traits<T>::is_zero(aik)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

template <class T>
Matrix<T> transpose(const Matrix<T>& a) {
  Matrix<T> t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

/// Entrywise complex conjugate (not the adjoint).
template <class T>
Matrix<T> conjugate(const Matrix<T>& a) {
  Matrix<T> c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = scalar_traits<T>::conj(a(i, j));
  return c;
}

template <class T>
Matrix<T> adjoint(const Matrix<T>& a) {
  Matrix<T> h(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) h(j, i) = scalar_traits<T>::conj(a(i, j));
  return h;
}

template <class T>
Matrix<T> mat_power(const Matrix<T>& a, unsigned k) {
  if (!a.is_square()) throw DimensionMismatch("mat_power of non-square " + a.shape());
  Matrix<T> result = Matrix<T>::identity(a.rows());
  Matrix<T> base = a;
  while (k > 0) {
    if (k & 1U) result = mat_mul(result, base);
    k >>= 1U;
    if (k > 0) base = mat_mul(base, base);
  }
  return result;
}

/// All powers a^0 .. a^kmax.
template <class T>
std::vector<Matrix<T>> power_table(const Matrix<T>& a, unsigned kmax) {
  if (!a.is_square()) throw DimensionMismatch("power_table of non-square " + a.shape());
  std::vector<Matrix<T>> out;
  out.reserve(kmax + 1);
  out.push_back(Matrix<T>::identity(a.rows()));
  for (unsigned k = 1; k <= kmax; ++k) out.push_back(mat_mul(out.back(), a));
  return out;
}

template <class T>
Matrix<T> kron(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          k(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
  return k;
}

template <class T>
Matrix<T> block_diag(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> d(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) d(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) d(a.rows() + i, a.cols() + j) = b(i, j);
  return d;
}

/// Copy of the nr x nc block starting at (r0, c0).
template <class T>
Matrix<T> block(const Matrix<T>& a, std::size_t r0, std::size_t c0, std::size_t nr,
                std::size_t nc) {
  if (r0 + nr > a.rows() || c0 + nc > a.cols()) {
    throw DimensionMismatch("block out of range for " + a.shape());
  }
  Matrix<T> b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = a(r0 + i, c0 + j);
  return b;
}

/// [[a11, a12], [a21, a22]] from conforming blocks.
template <class T>
Matrix<T> from_blocks(const Matrix<T>& a11, const Matrix<T>& a12, const Matrix<T>& a21,
                      const Matrix<T>& a22) {
  const std::size_t r1 = a11.rows(), r2 = a21.rows(), c1 = a11.cols(), c2 = a12.cols();
  if (a12.rows() != r1 || a22.rows() != r2 || a21.cols() != c1 || a22.cols() != c2) {
    throw DimensionMismatch("from_blocks: non-conforming blocks");
  }
  Matrix<T> m(r1 + r2, c1 + c2);
  auto put = [&m](const Matrix<T>& b, std::size_t r0, std::size_t c0) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) m(r0 + i, c0 + j) = b(i, j);
  };
  put(a11, 0, 0);
  put(a12, 0, c1);
  put(a21, r1, 0);
  put(a22, r1, c1);
  return m;
}

template <class T>
Matrix<T> commutator(const Matrix<T>& a, const Matrix<T>& b) {
  return mat_mul(a, b) - mat_mul(b, a);
}

template <class T>
std::vector<T> apply(const Matrix<T>& a, std::span<const T> x) {
  if (a.cols() != x.size()) throw DimensionMismatch("apply: vector length mismatch");
  std::vector<T> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

template <class T>
bool is_exact_zero(const Matrix<T>& a) {
  for (const auto& x : a.data())
    if (!scalar_traits<T>::is_zero(x)) return false;
  return true;
}

template <class T>
std::string to_string(const Matrix<T>& a) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < a.rows(); ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < a.cols(); ++j) os << (j ? ", " : "") << a(i, j);
    os << ']';
  }
  os << ']';
  return os.str();
}

}  // namespace qik
