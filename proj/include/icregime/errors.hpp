#pragma once

#include <stdexcept>
#include <string>

namespace icregime {

// Bad user input: malformed files, unknown fields, out-of-contract arguments
// arriving from the outside world. The CLI maps this to exit code 2.
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numeric machinery failed internally (non-convergence, singular system,
// iteration cap). The CLI maps this to exit code 3.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace icregime
