#pragma once

#include <complex>
#include <ostream>

#include <boost/multiprecision/cpp_int.hpp>

namespace qik {

/// Exact Gaussian integer a + bi with arbitrary-precision components.
class GaussianInt {
 public:
  using integer = boost::multiprecision::cpp_int;

  GaussianInt() = default;
  GaussianInt(long long re) : re_(re) {}  // NOLINT(google-explicit-constructor)
  GaussianInt(integer re, integer im) : re_(std::move(re)), im_(std::move(im)) {}

  const integer& real() const { return re_; }
  const integer& imag() const { return im_; }

  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }

  GaussianInt& operator+=(const GaussianInt& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussianInt& operator-=(const GaussianInt& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussianInt& operator*=(const GaussianInt& o) {
    integer re = re_ * o.re_ - im_ * o.im_;
    integer im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }

  friend GaussianInt operator+(GaussianInt a, const GaussianInt& b) { return a += b; }
  friend GaussianInt operator-(GaussianInt a, const GaussianInt& b) { return a -= b; }
  friend GaussianInt operator*(GaussianInt a, const GaussianInt& b) { return a *= b; }
  friend GaussianInt operator-(const GaussianInt& a) { return {-a.re_, -a.im_}; }
  friend bool operator==(const GaussianInt& a, const GaussianInt& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  friend GaussianInt conj(const GaussianInt& a) { return {a.re_, -a.im_}; }

  std::complex<double> to_complex() const {
    return {re_.convert_to<double>(), im_.convert_to<double>()};
  }

  friend std::ostream& operator<<(std::ostream& os, const GaussianInt& g) {
    return os << '(' << g.re_ << ',' << g.im_ << ')';
  }

 private:
  integer re_{0};
  integer im_{0};
};

GaussianInt conj(const GaussianInt& a);

}  // namespace qik
