#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace zob {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputDomainError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidSpecError : public Error {
 public:
  using Error::Error;
};

class InvalidBlockError : public Error {
 public:
  using Error::Error;
};

class InvalidRadiusError : public Error {
 public:
  using Error::Error;
};

class InvalidParameterError : public Error {
 public:
  using Error::Error;
};

class UnsupportedMetricError : public Error {
 public:
  using Error::Error;
};

class DivisionDomainError : public Error {
 public:
  using Error::Error;
};

/// The black box returned a non-finite value. Carries the query point.
class OracleFailure : public Error {
 public:
  OracleFailure(const std::string& what, std::vector<double> x) : Error(what), x_(std::move(x)) {}
  const std::vector<double>& point() const { return x_; }

 private:
  std::vector<double> x_;
};

/// Inner solver stopped at its iteration cap above tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// A solver step failed; wraps the underlying message with the iteration index.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, std::int64_t iteration) : Error(what), iteration_(iteration) {}
  std::int64_t iteration() const { return iteration_; }

 private:
  std::int64_t iteration_;
};

}  // namespace zob
