#ifndef CURBFLOW_ERRORS_HPP
#define CURBFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace curbflow {

// Bad user input: malformed files, unknown keys, violated scenario invariants.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A quantity outside its mathematical domain (density, speed, ...).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// A requested control vector violates the problem constraints.
class FeasibilityError : public std::runtime_error {
public:
    explicit FeasibilityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical breakdown (factorization failure after jitter escalation, ...).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Input shape does not match a trained model or metric contract.
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace curbflow

#endif
