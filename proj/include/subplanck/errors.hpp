#pragma once

#include <stdexcept>
#include <string>

namespace subplanck {

/// Invalid user-facing configuration (CLI flags, config files, state specs).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical post-condition failed (non-finite values, imaginary residue, ...).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace subplanck
