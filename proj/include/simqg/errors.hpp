#pragma once

#include <stdexcept>
#include <string>

namespace simqg {

/// Invalid physical input (negative mass, zero direction vector, ...).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed or inconsistent configuration file / CLI input.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A quadrature or iterative solver failed to reach the requested tolerance.
/// Carries the best estimate achieved so callers can degrade gracefully.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double achieved_value, double achieved_error)
        : std::runtime_error(what), value(achieved_value), error(achieved_error) {}
    double value;
    double error;
};

} // namespace simqg
