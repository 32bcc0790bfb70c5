#pragma once

#include <stdexcept>
#include <string>

namespace gibbs {

/// Out-of-range or inconsistent user parameters.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A pair potential produced a negative or NaN energy difference.
class InvalidPotentialError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Internal bookkeeping (grid vs configuration) went out of sync.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A truncated series could not be shown to meet its tail tolerance.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested particle count cannot be realised in the domain.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gibbs
