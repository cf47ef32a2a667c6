#pragma once

#include <stdexcept>
#include <string>

namespace linv {

/// Input outside an operation's domain (non-unit residue, odd weight, ...).
struct DomainError : std::invalid_argument {
  explicit DomainError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// A quantity is indistinguishable from zero (or otherwise undetermined) at
/// the working precision. Callers may retry at higher precision.
struct PrecisionError : std::runtime_error {
  explicit PrecisionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An internal consistency check failed (decomposition bug, non-scalar U_p, ...).
struct ComputationError : std::runtime_error {
  explicit ComputationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A search (twist discriminant, generator operator, ...) exhausted its bound.
struct SearchExhausted : std::runtime_error {
  explicit SearchExhausted(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace linv
