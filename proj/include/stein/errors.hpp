#pragma once

#include <stdexcept>
#include <string>

namespace stein {

// Domain errors (bad order, negative norm, ...) use std::domain_error directly.

/// Invalid run configuration or model parameters. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure (quadrature non-convergence, non-finite results). Exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace stein
