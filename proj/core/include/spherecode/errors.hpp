#pragma once

#include <stdexcept>

namespace spherecode {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two operands have incompatible ambient dimensions.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A hull operation received an empty point set.
class EmptyHull : public Error {
 public:
  using Error::Error;
};

/// A class or column index is outside the valid range.
class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

/// A residual direction is too short to normalize meaningfully.
class DegenerateResidual : public Error {
 public:
  using Error::Error;
};

/// A configuration struct fails its validity checks.
class InvalidConfig : public Error {
 public:
  using Error::Error;
};

/// A matrix or point-set shape violates a structural precondition.
class InvalidShape : public Error {
 public:
  using Error::Error;
};

/// A class count is outside the supported range for a construction.
class InvalidK : public Error {
 public:
  using Error::Error;
};

/// A sample label refers to a class that does not exist.
class LabelOutOfRange : public Error {
 public:
  using Error::Error;
};

/// Two related containers disagree on their shape.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

/// A class mean or classifier row has (numerically) zero length.
class ZeroNormClass : public Error {
 public:
  using Error::Error;
};

/// An optimization objective became NaN or infinite.
class NonFiniteLoss : public Error {
 public:
  using Error::Error;
};

/// A file could not be parsed; messages carry file and line context.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace spherecode
