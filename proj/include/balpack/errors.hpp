#pragma once

#include <stdexcept>
#include <string>

namespace balpack {

/// Malformed instance text or JSON. `line` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Graph construction rejected (loop, out-of-range vertex, arc into the root).
class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A selection does not have the shape an operation requires.
class StructureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Caller broke an operation's precondition.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Something the underlying theorems rule out happened anyway.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Oracle asked to run on an instance outside its budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace balpack
