#pragma once

#include <stdexcept>
#include <string>

namespace xxz {

// Bad user input: malformed configs, violated preconditions on parameters.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation that started from valid input but could not produce a
// trustworthy number (step too coarse, fit or relaxation did not converge,
// undefined phase).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace xxz
