#pragma once

#include <stdexcept>
#include <string>

namespace polar_rsma {

// Invalid or inconsistent user-supplied configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Internal numerical failure (non-convergent quadrature, degenerate
// geometry); carries diagnostics in the message.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace polar_rsma
