#pragma once

#include <stdexcept>

namespace lbcalc {

// Malformed input: wrong shape, non-finite entries, mismatched dimensions.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A mathematical precondition (convergence radius, containment, ...) failed.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A direct limit was asked to measure an element kind it has no norm for.
class ConfigurationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A certified post-condition failed. Reaching this is a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace lbcalc
