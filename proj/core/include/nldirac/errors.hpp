#pragma once

#include <stdexcept>
#include <string>

namespace nld {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ShapeError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class DomainError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class AmbiguousSplit : public Error {
 public:
  using Error::Error;
};

class TruncationUnsafe : public Error {
 public:
  using Error::Error;
};

class ChartOverflow : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class SolverFailure : public Error {
 public:
  using Error::Error;
};

class DegenerateFiber : public SolverFailure {
 public:
  using SolverFailure::SolverFailure;
};

class BracketFailure : public SolverFailure {
 public:
  using SolverFailure::SolverFailure;
};

// Raised when a converged energy is not below the compactness threshold.
class GuardViolation : public Error {
 public:
  GuardViolation(const std::string& what, double energy, double threshold)
      : Error(what), energy_(energy), threshold_(threshold) {}
  double energy() const noexcept { return energy_; }
  double threshold() const noexcept { return threshold_; }

 private:
  double energy_;
  double threshold_;
};

}  // namespace nld
