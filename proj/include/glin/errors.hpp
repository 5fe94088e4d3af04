#pragma once

#include <stdexcept>
#include <string>

namespace glin {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition (bad argument, mismatched base point).
class ContractViolation : public Error {
public:
  using Error::Error;
};

/// The logarithm was requested at or beyond the injectivity radius.
class CutLocusError : public Error {
public:
  using Error::Error;
};

/// Two bundle elements that should share a fiber do not.
class FiberMismatch : public Error {
public:
  using Error::Error;
};

/// Discretized maps with incompatible grids or targets.
class ShapeError : public Error {
public:
  using Error::Error;
};

/// An objective or path produced a non-finite value.
class EvaluationError : public Error {
public:
  using Error::Error;
};

}  // namespace glin
