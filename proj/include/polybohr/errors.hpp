#ifndef POLYBOHR_ERRORS_HPP
#define POLYBOHR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace polybohr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in different dimensions.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A count or factorial exceeds what the fixed-width arithmetic can represent.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A parameter lies outside the range where the operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A geometric tail bound does not converge at the requested radius (q*r >= 1).
class DivergentTail : public Error {
 public:
  using Error::Error;
};

/// A root bracket (or scan grid) shows no sign change.
class NoSignChange : public Error {
 public:
  using Error::Error;
};

}  // namespace polybohr

#endif  // POLYBOHR_ERRORS_HPP
