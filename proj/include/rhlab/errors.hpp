#pragma once

#include <stdexcept>
#include <string>

namespace rhlab {

// Argument outside the mathematical domain of an operation (n = 0 for mu, s <= 1 for zeta, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Request exceeds a configured memory or segment budget.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class InsufficientDataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed, truncated or tampered checkpoint.
class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace rhlab
