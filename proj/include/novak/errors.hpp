#pragma once

#include <stdexcept>
#include <string>

namespace novak {

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct PreconditionViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A factorization or order computation ran out of its effort budget.
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SizeLimitExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Syntax problem in a factor-cache file; carries the 1-based line number.
struct CacheFormatError : std::runtime_error {
  CacheFormatError(std::size_t line_no, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + what),
        line(line_no) {}
  std::size_t line;
};

// A cache record whose factor product does not reproduce its value.
struct CacheProductError : std::runtime_error {
  CacheProductError(std::size_t line_no, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + what),
        line(line_no) {}
  std::size_t line;
};

// An input that was supposed to satisfy a proved property failed its
// invariants.  Surfaced loudly instead of being swallowed: such a failure
// would be mathematically significant.
struct CounterexampleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace novak
