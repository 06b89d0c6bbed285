#pragma once

#include <stdexcept>
#include <string>

namespace conemeans {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonHermitianInput : public Error {
 public:
  using Error::Error;
};

class NotPositiveSemidefinite : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A scalar function produced a non-finite value on the spectrum.
class DomainError : public Error {
 public:
  using Error::Error;
};

class SingularPower : public Error {
 public:
  using Error::Error;
};

class SingularT : public Error {
 public:
  using Error::Error;
};

class InvalidExponent : public Error {
 public:
  using Error::Error;
};

class BoundaryDivergence : public Error {
 public:
  using Error::Error;
};

class ZeroVector : public Error {
 public:
  using Error::Error;
};

class EmptyProbeSet : public Error {
 public:
  using Error::Error;
};

class IncompatibleForm : public Error {
 public:
  using Error::Error;
};

class InputParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace conemeans
