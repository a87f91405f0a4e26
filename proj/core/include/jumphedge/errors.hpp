#pragma once

#include <stdexcept>
#include <string>

namespace jumphedge {

// Invalid configuration, schema violation or violated precondition.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Numerical failure: scheme instability, blown exclusion budget,
// non-finite values, non-positive prices.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace jumphedge
