#pragma once

#include <stdexcept>
#include <string>

namespace cpi {

// Bad configuration input (unknown key, out-of-range value, missing file).
// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure at run time (wrap-around, non-convergence, pole in band).
// The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace cpi
