#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qeevqe {

/// Base class for every error raised by the library. The CLI maps
/// subclasses onto exit codes (see `exit_code`).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ResourceError : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Channel parameters outside the physically allowed region (T2 > 2 T1).
class PhysicalityError : public Error {
 public:
  using Error::Error;
};

/// Non-finite objective values, non-Hermitian expectation, degenerate projections.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// 0 success, 1 validation-class failure, 2 numerical failure.
inline int exit_code(const Error& e) {
  if (dynamic_cast<const NumericalError*>(&e) != nullptr) return 2;
  return 1;
}

}  // namespace qeevqe
