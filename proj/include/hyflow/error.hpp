#pragma once

#include <stdexcept>
#include <string>

namespace hyflow {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Quadrature, ODE or root-finding budget exhausted.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_reached)
      : Error(what), last_reached_(last_reached) {}
  explicit ConvergenceError(const std::string& what) : Error(what) {}
  double last_reached() const { return last_reached_; }

 private:
  double last_reached_ = 0.0;
};

// Ramp violates b' >= 0 or b''H > -b'^2 sqrt(1+b'^2).
class InadmissibleError : public Error {
 public:
  InadmissibleError(const std::string& what, double x) : Error(what), x_(x) {}
  double x() const { return x_; }

 private:
  double x_;
};

// Delta-shock entropy or layer positivity check failed.
class EntropyViolation : public Error {
 public:
  EntropyViolation(const std::string& what, double x) : Error(what), x_(x) {}
  double x() const { return x_; }

 private:
  double x_;
};

// Malformed problem specification.
class SpecError : public Error {
 public:
  using Error::Error;
};

}  // namespace hyflow
