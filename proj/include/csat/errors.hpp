// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace csat {

// Error taxonomy, mirrored by the CLI exit codes:
//   UsageError/DomainError -> 1, FormatError -> 2, ResourceError/BudgetError -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed incompatible arguments (mixed fields, arity mismatch, bad flags).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Value outside the mathematical domain of the operation (inverse of zero,
// degree above the encodable bound, non-prime modulus).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed input file; line is 1-based, 0 when unknown.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& msg, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// An exhaustive operation would exceed the configured point limit.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// The time budget ran out before an answer was established.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace csat
