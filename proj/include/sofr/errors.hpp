#pragma once

#include <stdexcept>

namespace sofr {

// Malformed user input: bad shapes, non-finite data, unparseable files.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Numerical breakdown while fitting (singular systems, non-finite objective).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sofr
