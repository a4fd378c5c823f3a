#pragma once

#include <stdexcept>
#include <string>

namespace coopdyn {

// Malformed input: payoff ordering, parameter ranges, config keys.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// NaN, lost normalization, or any other broken numerical invariant.
class NumericalIntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace coopdyn
