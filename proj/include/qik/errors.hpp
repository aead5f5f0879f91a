#pragma once

#include <stdexcept>
#include <string>

namespace qik {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

/// Eigenvalue iteration failed; the input is too ill-conditioned to report a spectrum.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// An error that carries the residual which triggered it.
class ResidualError : public Error {
 public:
  ResidualError(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Symbol S with S * conj(S) != I, i.e. C^2 != I.
class NotInvolutive : public ResidualError {
 public:
  using ResidualError::ResidualError;
};

class NotUnitary : public ResidualError {
 public:
  using ResidualError::ResidualError;
};

/// The conjugation does not split along the requested subspace and its complement.
class NotReducing : public ResidualError {
 public:
  using ResidualError::ResidualError;
};

class HypothesisFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace qik
