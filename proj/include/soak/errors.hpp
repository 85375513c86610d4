#pragma once

#include <stdexcept>
#include <string>

namespace soak {

/// Invalid numeric argument (negative variance, nonpositive budget, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Per-channel vectors disagree in length.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A series or iteration exceeded its convergence budget.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The main channel cannot sustain the target secrecy rate.
class InfeasibleTargetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An estimator finished with no usable samples.
class NoDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed config, fixture, or flag text.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace soak
