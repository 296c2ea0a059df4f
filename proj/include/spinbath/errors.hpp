#pragma once

#include <stdexcept>
#include <string>

namespace spinbath {

// Configuration / input validation problems.  CLI exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Physics-level failures, e.g. a root finder given a bracket with no sign
// change.  CLI exit code 3.
struct NoSignChangeError : std::runtime_error {
  explicit NoSignChangeError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failures (divergence budget exceeded).  CLI exit code 4.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace spinbath
