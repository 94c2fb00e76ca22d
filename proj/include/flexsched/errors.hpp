#pragma once

#include <stdexcept>
#include <string>

namespace flexsched {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidArgument : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct DomainViolation : Error {
  using Error::Error;
};

struct InfeasibleConfig : Error {
  using Error::Error;
};

struct InfeasibleInput : Error {
  using Error::Error;
};

struct NotRectangular : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(const std::string& msg, int line)
      : Error(msg + " (line " + std::to_string(line) + ")"), line(line) {}
  int line = 0;
};

struct BudgetExceeded : Error {
  BudgetExceeded(const std::string& msg, double bound)
      : Error(msg), bound(bound) {}
  double bound = 0;  // product of admissible-start counts
};

}  // namespace flexsched
