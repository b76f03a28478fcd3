#pragma once

#include <charconv>
#include <stdexcept>
#include <string>

namespace qineq {

/// Bad arguments or a violated precondition (dimension mismatch, failed
/// theorem hypothesis, unknown id). The CLI maps this to exit status 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A value lies outside the domain of the requested operation
/// (non-invertible quaternion, spectrum outside a function's domain).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Numerical failure inside a kernel (eigensolver, post-condition residual).
/// The CLI maps this to exit status 3.
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal that reads back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace qineq
