#pragma once

#include <stdexcept>
#include <string>

namespace tmma {

// Root of every error thrown by the library. Contract violations by the
// caller (bad shapes, capacity, protocol misuse, malformed files) all derive
// from here so front ends can map them to a single "runtime failure" path.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand dimensions do not conform.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Operand exceeds a fixed on-chip buffer.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Call sequence not allowed by the device protocol (e.g. reusing A before
// any A has been loaded).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Value outside the domain of an operation (non-finite input, bad scale).
class ValueError : public Error {
 public:
  using Error::Error;
};

// Matrix file could not be parsed.
class FormatError : public Error {
 public:
  using Error::Error;
};

class BadMagicError : public FormatError {
 public:
  using FormatError::FormatError;
};

class TruncatedError : public FormatError {
 public:
  using FormatError::FormatError;
};

class UnknownDtypeError : public FormatError {
 public:
  using FormatError::FormatError;
};

// Filesystem-level failure (cannot open, cannot write).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tmma
