#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace procstar {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Levels of a tower are numbered from 1.
using Level = std::size_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A function was evaluated at a point outside its domain.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, std::vector<Complex> points)
      : Error(what), points_(std::move(points)) {}
  const std::vector<Complex>& points() const noexcept { return points_; }

 private:
  std::vector<Complex> points_;
};

/// A level beyond the data horizon of an explicitly truncated element.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, Level level) : Error(what), level_(level) {}
  Level level() const noexcept { return level_; }

 private:
  Level level_;
};

/// Shapes, block assignments or towers that do not fit together.
class StructuralError : public Error {
 public:
  using Error::Error;
};

class EigensolverError : public Error {
 public:
  using Error::Error;
};

/// An eigenvalue sits on the branch ray of a logarithm.
class BranchError : public Error {
 public:
  BranchError(const std::string& what, Complex eigenvalue, Level level)
      : Error(what), eigenvalue_(eigenvalue), level_(level) {}
  Complex eigenvalue() const noexcept { return eigenvalue_; }
  Level level() const noexcept { return level_; }

 private:
  Complex eigenvalue_;
  Level level_;
};

std::string format_complex(Complex z);

}  // namespace procstar
