#pragma once

#include <stdexcept>
#include <string>

namespace crbm {

/// Bad configuration (schemas, fractions, grids, run configs). CLI exit 1.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Bad input data (out-of-domain values, malformed files). CLI exit 2.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Failure while running (training divergence, corrupt model files). CLI exit 3.
struct RunError : std::runtime_error {
  explicit RunError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace crbm
