#pragma once

#include <stdexcept>
#include <string>

namespace brwp {

// Invalid or inconsistent run configuration (bad keys, values, combinations).
struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical breakdown at runtime: non-finite state, failed factorization,
// quadrature that cannot reach its tolerance.
struct numeric_error : std::runtime_error {
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// File system failure; the message names the offending path.
struct io_error : std::runtime_error {
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace brwp
