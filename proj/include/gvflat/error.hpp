#ifndef GVFLAT_ERROR_HPP
#define GVFLAT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace gvflat {

// Raised when an operation is called outside its domain (bad dimensions,
// non-positive scales, contour through a pole, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A truncated series could not hold the requested terms.
class WindowError : public std::range_error {
 public:
  using std::range_error::range_error;
};

// Quadrature or extrapolation did not reach the requested accuracy.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An exact identity check found a mismatch.
class CheckFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gvflat

#endif
