#pragma once

#include <stdexcept>
#include <string>

namespace biharm {

enum class ErrorKind {
  InvalidArgument,
  Parse,
  Domain,
  Constraint,
  Numerical,
  NotApplicable,
};

/// Base exception for the library. The C API maps `kind()` to a status code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error invalid_argument(const std::string& msg) { return {ErrorKind::InvalidArgument, msg}; }
inline Error domain_error(const std::string& msg) { return {ErrorKind::Domain, msg}; }
inline Error constraint_error(const std::string& msg) { return {ErrorKind::Constraint, msg}; }
inline Error numerical_error(const std::string& msg) { return {ErrorKind::Numerical, msg}; }

}  // namespace biharm
