#pragma once

#include <stdexcept>
#include <string>

namespace synthcat {

// Error taxonomy maps onto process exit codes in the CLI:
//   ConfigError  -> 1 (bad configuration, bad CLI usage, unresolvable paths)
//   DataError    -> 2 (malformed input data, schema violations)
//   NumericError -> 3 (sampler abort: invalid arguments, NaN conditionals)

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace synthcat
