#pragma once

#include <stdexcept>
#include <string>

namespace srvar {

/// Bad user input: malformed data, inconsistent specifications, missing keys.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A factorization or sampler step failed on otherwise valid input.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace srvar
