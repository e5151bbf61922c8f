#pragma once

#include <stdexcept>
#include <string>

namespace qclust {

// Invalid configuration values (qubit count, cluster count, flag ranges).
// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// API misuse: mismatched dimensions, empty inputs. Exit code 2.
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Malformed input data (bad CSV rows, non-numeric cells). Exit code 3.
class IngestionError : public std::runtime_error {
 public:
  explicit IngestionError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite values produced during optimization. Exit code 4.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qclust
