#pragma once

#include <stdexcept>
#include <string>

namespace uavrl {

// Error taxonomy shared by the library and the CLI. Each class maps to a
// stable machine-readable category string and a distinct process exit code.
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& msg, int exit_code)
        : std::runtime_error(msg), category_(std::move(category)), exit_code_(exit_code) {}

    const std::string& category() const noexcept { return category_; }
    int exit_code() const noexcept { return exit_code_; }

private:
    std::string category_;
    int exit_code_;
};

// Invalid configuration value or schema violation.
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error("config", msg, 2) {}
};

// Filesystem / serialization failure.
struct IoError : Error {
    explicit IoError(const std::string& msg) : Error("io", msg, 3) {}
};

// Shape or cardinality mismatch between artifacts (nets, checkpoints, states).
struct DimensionError : Error {
    explicit DimensionError(const std::string& msg) : Error("dimension", msg, 4) {}
};

// Caller violated an operation precondition.
struct ContractError : Error {
    explicit ContractError(const std::string& msg) : Error("contract", msg, 5) {}
};

// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error("domain", msg, 6) {}
};

// Enumeration or resource budget exceeded.
struct BudgetError : Error {
    explicit BudgetError(const std::string& msg) : Error("budget", msg, 7) {}
};

// Non-finite value reached a place where training cannot continue.
struct NumericError : Error {
    explicit NumericError(const std::string& msg) : Error("numeric", msg, 8) {}
};

} // namespace uavrl
