#pragma once

#include <stdexcept>
#include <string>

namespace dickeqfi {

// Caller passed arguments that violate an operation's preconditions.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A ladder that breaks the DecayLadder invariants, or one for which an
// integral would not converge.
class InvalidLadder : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The brute-force oracle refuses configurations above its size guard.
class OracleTooLarge : public std::length_error {
 public:
  OracleTooLarge(int requested, int limit)
      : std::length_error("oracle too large: " + std::to_string(requested) +
                          " total photons exceeds the limit of " + std::to_string(limit)),
        requested_(requested),
        limit_(limit) {}

  int requested() const noexcept { return requested_; }
  int limit() const noexcept { return limit_; }

 private:
  int requested_;
  int limit_;
};

// Integration or evaluation produced a result that failed its own checks.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dickeqfi
