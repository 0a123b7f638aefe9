#pragma once

#include <stdexcept>
#include <string>

namespace qif {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Problem in a program source file, with 1-based position.
struct ParseError : Error {
  int line;
  int column;
  ParseError(const std::string& msg, int line, int column)
      : Error(msg + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line(line),
        column(column) {}
};

// Division or modulo by zero hit while executing a step.
struct EvalError : Error {
  using Error::Error;
};

// Step budget exhausted; the program most likely does not terminate.
struct BudgetError : Error {
  using Error::Error;
};

// Malformed scheduler spec or an invalid scheduling decision.
struct SchedulerError : Error {
  using Error::Error;
};

// Invalid distribution construction or a zero-mass observation.
struct DomainError : Error {
  using Error::Error;
};

}  // namespace qif
