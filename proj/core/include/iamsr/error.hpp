#pragma once

#include <stdexcept>
#include <string>

namespace iamsr {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class FieldMismatchError : public Error {
 public:
  using Error::Error;
};

class DivisionByZeroError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Raised when a linear system has no unique solution.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

class InvalidParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed node file, manifest or payload.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace iamsr
