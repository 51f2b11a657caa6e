#pragma once

#include <stdexcept>
#include <string>

namespace sobolev {

// Input violates a documented precondition (bad exponent, radius, length...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A field or quantity that must be nonzero is zero (e.g. ||u||_q = 0).
class DegenerateInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A proof-regime condition (e.g. "s close enough to q") is not satisfied.
class OutOfRegime : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Not enough samples to form a diagnostic.
class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sobolev
