#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace invscat {

// Bad input: malformed files, violated preconditions, inconsistent data.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The numbers went wrong: singular systems, non-finite integrands.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrixError : public NumericalError {
 public:
  SingularMatrixError(std::size_t pivot, const std::string& what)
      : NumericalError(what), pivot_(pivot) {}
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

// Singular linear system for the Marchenko row p.
class SingularSystemError : public SingularMatrixError {
 public:
  SingularSystemError(std::size_t p, std::size_t pivot, const std::string& what)
      : SingularMatrixError(pivot, what), p_(p) {}
  std::size_t p() const noexcept { return p_; }

 private:
  std::size_t p_;
};

class NonFiniteIntegrandError : public NumericalError {
 public:
  NonFiniteIntegrandError(double q, const std::string& what)
      : NumericalError(what), q_(q) {}
  double q() const noexcept { return q_; }

 private:
  double q_;
};

class CsvError : public ValidationError {
 public:
  CsvError(std::size_t line, const std::string& what)
      : ValidationError(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace invscat
