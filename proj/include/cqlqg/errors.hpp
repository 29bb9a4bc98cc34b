#pragma once

#include <stdexcept>
#include <string>

namespace cqlqg {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dimension or block-partition mismatch; message names the offending matrix.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Plant validation failures (odd dimensions, rank-deficient D or D0, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An operation that requires a Hurwitz matrix received one that is not.
class NotHurwitzError : public Error {
 public:
  using Error::Error;
};

// A closed loop that must be stable is not.
class UnstableError : public Error {
 public:
  using Error::Error;
};

// Vectorized operator matrix is numerically singular.
class SingularOperatorError : public Error {
 public:
  using Error::Error;
};

// Lyapunov system singular despite the Hurwitz precheck.
class SingularLyapunovError : public Error {
 public:
  using Error::Error;
};

// Dense eigenvalue solver failed to converge.
class EigenvalueError : public Error {
 public:
  using Error::Error;
};

// Internal cross-check failed (affine/chain-rule/cost-form mismatch).
// Signals a bug, not bad input.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// Transformation matrix does not preserve the canonical form.
class NotSymplecticError : public Error {
 public:
  using Error::Error;
};

// No stabilizing starting point found for the synthesis iteration.
class InitializationError : public Error {
 public:
  using Error::Error;
};

// Riccati iteration failed to produce a stabilizing solution.
class NoStabilizingSolutionError : public Error {
 public:
  using Error::Error;
};

}  // namespace cqlqg
