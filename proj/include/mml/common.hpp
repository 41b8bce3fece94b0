#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace mml {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

inline constexpr cplx I{0.0, 1.0};

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A requested Fock space is larger than the dense backend accepts.
class DenseLimitError : public Error {
 public:
  using Error::Error;
};

/// Input violates a documented precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Quench strength outside the topological phase.
class RegimeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Integrator step size fails the stability heuristic.
class StabilityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Spectral density family for which an integral is not defined.
class UnsupportedFamilyError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A fidelity series never dropped below the requested threshold.
class NoCrossingError : public Error {
 public:
  NoCrossingError(const std::string& what, double final_value)
      : Error(what), final_value_(final_value) {}
  double final_value() const noexcept { return final_value_; }

 private:
  double final_value_;
};

/// Numerical routine failed (eigensolver, SVD, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace mml
