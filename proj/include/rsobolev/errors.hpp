#pragma once

#include <stdexcept>

namespace rsobolev {

// Bad input: shapes, violated invariants, out-of-range parameters, exceeded budgets.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical routine failed to converge or produced a non-finite result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rsobolev
