#pragma once

#include <stdexcept>
#include <string>

namespace lifemax {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// An argument is outside the mathematical domain of an operation
/// (nonpositive distance, self-link, negative data amount, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A structural invariant of a domain type is violated (duplicate
/// transmitter in an interference set, collector transmitting, ...).
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// A request exceeds a hard resource cap (spanning-tree enumeration size).
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

/// The closed-form solution produced a negative duration/weight and does
/// not apply to this instance; callers should fall back to the LP solver.
class InapplicableError : public Error {
 public:
  using Error::Error;
};

/// The linear program has no feasible point.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// The linear program is unbounded below.
class UnboundedError : public Error {
 public:
  using Error::Error;
};

/// A link with zero capacity was asked to carry data.
class UndeliverableError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent run configuration (CLI layer).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace lifemax
