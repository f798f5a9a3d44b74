#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pcpu {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (e.g. negative radius).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  NumericalFailure(const std::string& what, double condition_estimate)
      : Error(what), condition_estimate_(condition_estimate) {}

  // Reciprocal condition estimate of the offending matrix, or 0 if not applicable.
  double condition_estimate() const noexcept { return condition_estimate_; }

 private:
  double condition_estimate_;
};

class PatchInfeasible : public Error {
 public:
  PatchInfeasible(const std::string& what, std::size_t patch)
      : Error(what), patch_(patch) {}

  std::size_t patch() const noexcept { return patch_; }

 private:
  std::size_t patch_;
};

class CoverageError : public Error {
 public:
  using Error::Error;
};

// Bad input data; `line` is 1-based (file line or data row), 0 when unknown.
class IngestError : public Error {
 public:
  IngestError(const std::string& what, std::size_t line) : Error(what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t step) : Error(what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace pcpu
