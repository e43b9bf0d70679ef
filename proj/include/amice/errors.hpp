#pragma once

#include <stdexcept>
#include <string>

namespace amice {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DivisionByZero : Error {
  using Error::Error;
};

struct PrecisionExhausted : Error {
  using Error::Error;
};

// A value that is 0 to full working precision but not an exact zero:
// only a lower bound on its valuation is known.
struct IndeterminateValuation : Error {
  IndeterminateValuation(long prime, long lower_bound)
      : Error("indeterminate valuation: value is O(" + std::to_string(prime) +
              "^" + std::to_string(lower_bound) + "), only a lower bound on v"),
        prime(prime),
        lower_bound(lower_bound) {}
  long prime;
  long lower_bound;
};

struct OutOfConvergenceDomain : Error {
  using Error::Error;
};

struct NotAUnit : Error {
  using Error::Error;
};

struct LogDomain : Error {
  using Error::Error;
};

struct ExponentSolveFailed : Error {
  using Error::Error;
};

struct NotSolvable : Error {
  using Error::Error;
};

struct PreconditionViolated : Error {
  using Error::Error;
};

struct HypothesisViolated : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

}  // namespace amice
