#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace meyer {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (dimension mismatch, bad JSON, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition failed (degenerate patch, empty set, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A combinatorial budget was exhausted. Never a silent truncation.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// A certificate that should hold was found not to hold.
class CertificateFailure : public Error {
 public:
  using Error::Error;
};

/// Default enumeration budget; MEYERLIFT_BUDGET overrides it when set.
std::uint64_t default_budget();

}  // namespace meyer
