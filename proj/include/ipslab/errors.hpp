#pragma once

#include <stdexcept>
#include <string>

namespace ipslab {

/// Operands come from different fields.
class FieldMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DivisionByZero : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A caller-supplied argument violates an operation's precondition.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured size guard (variable count, width, matrix size) was exceeded.
class GuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// An axiom vanishes somewhere on the Boolean cube where it must not.
class SatisfiableError : public std::domain_error {
 public:
  SatisfiableError(const std::string& what, std::string witness)
      : std::domain_error(what), witness_(std::move(witness)) {}
  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string witness_;
};

/// A self-check inside the library failed; indicates a bug, not bad input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace ipslab
