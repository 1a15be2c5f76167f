#pragma once

#include <stdexcept>
#include <string>

namespace fmlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed files, bad arguments, violated preconditions.
struct InputError : Error {
  using Error::Error;
};

// Formula parsing; carries a 0-based character offset into the source text.
struct ParseError : Error {
  std::size_t position;
  ParseError(const std::string& what, std::size_t pos)
      : Error(what + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
};

// Formula evaluation: unassigned variable, unknown symbol, arity mismatch.
struct EvalError : Error {
  using Error::Error;
};

// A search exceeded its configured budget.
struct BudgetError : Error {
  using Error::Error;
};

}  // namespace fmlab
