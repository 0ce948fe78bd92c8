#pragma once

#include <stdexcept>
#include <string>

namespace ranopt {

/// Invalid user-supplied parameters or inconsistent inputs.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input file; `field()` names the offending key.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& field, const std::string& msg)
      : std::runtime_error("parse error at field '" + field + "': " + msg), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// A documented precondition of an operation was violated by the caller.
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& msg) : std::logic_error(msg) {}
};

/// Non-finite value produced inside an iterative solver.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& msg, int iteration)
      : std::runtime_error(msg + " (iteration " + std::to_string(iteration) + ")"),
        iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

/// The solver objective decreased beyond numerical slack; aborts with diagnostics.
class MonotonicityError : public std::runtime_error {
 public:
  MonotonicityError(int iteration, double previous, double current)
      : std::runtime_error("objective decreased at iteration " + std::to_string(iteration) +
                           ": " + std::to_string(previous) + " -> " + std::to_string(current)),
        iteration_(iteration), previous_(previous), current_(current) {}
  int iteration() const { return iteration_; }
  double previous() const { return previous_; }
  double current() const { return current_; }

 private:
  int iteration_;
  double previous_;
  double current_;
};

}  // namespace ranopt
