#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rbd {

/// Operand shapes do not agree (matrix/vector lengths, N < M, ...).
class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A Hermitian input was required and the matrix is not Hermitian within tolerance.
class NotHermitianError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Cholesky met a pivot at or below the threshold.
class DefinitenessError : public std::runtime_error {
public:
  DefinitenessError(std::size_t pivot, double value)
      : std::runtime_error("matrix is not positive definite: pivot " + std::to_string(pivot) +
                           " = " + std::to_string(value)),
        pivot_(pivot),
        value_(value) {}

  std::size_t pivot() const noexcept { return pivot_; }
  double value() const noexcept { return value_; }

private:
  std::size_t pivot_;
  double value_;
};

/// Triangular or ratio computation would divide by (numerically) zero.
class SingularityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside its admissible domain (zeta >= 1, sigma2 < 0, ...).
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid simulation configuration: unknown key, bad value, violated invariant.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed text input. Carries the 1-based line and the offending field name.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, std::string field, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", field '" + field + "': " + what),
        line_(line),
        field_(std::move(field)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

private:
  std::size_t line_;
  std::string field_;
};

}  // namespace rbd
