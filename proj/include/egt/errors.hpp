#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace egt {

// Operand dimensions disagree; the message carries both sizes.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A domain value failed validation (bad probability vector, non-Hermitian
// matrix, non-finite entry, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An entropy formula was evaluated on the simplex boundary where it is
// undefined.
class BoundaryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Integration produced a non-finite state; carries the offending time.
class NumericalAbort : public std::runtime_error {
 public:
  NumericalAbort(const std::string& what, double time)
      : std::runtime_error(what + " at t=" + std::to_string(time)), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

// A constrained solve cannot reach the requested target; the message names
// the violated bound.
class InfeasibleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The problem is degenerate (e.g. a constant energy spectrum).
class DegenerateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An input file violates the schema; carries the offending field path.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string field, const std::string& what)
      : std::runtime_error("schema violation at '" + field + "': " + what),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace egt
