#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hype {

/// Failure category. The numeric values double as CLI exit codes.
enum class ErrorKind : int {
    usage = 1,
    validation = 2,
    numerical = 3,
};

inline const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::usage: return "usage";
    case ErrorKind::validation: return "validation";
    case ErrorKind::numerical: return "numerical";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

/// Bad parameters or invocation (window = 0, missing sector map, ...).
class UsageError : public Error {
public:
    explicit UsageError(const std::string& message) : Error(ErrorKind::usage, message) {}
};

/// Input data violates a contract. `line` is 1-based, 0 when not tied to a line.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& message, std::size_t line = 0)
        : Error(ErrorKind::validation,
                line == 0 ? message : "line " + std::to_string(line) + ": " + message),
          line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Required column missing or header malformed.
class SchemaError : public ValidationError {
public:
    explicit SchemaError(const std::string& message) : ValidationError(message) {}
};

/// Two inputs do not share the dates or entities an operation needs.
class AlignmentError : public ValidationError {
public:
    explicit AlignmentError(const std::string& message) : ValidationError(message) {}
};

/// Degenerate arithmetic: zero denominators, constant samples, nonpositive logs.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& message) : Error(ErrorKind::numerical, message) {}
};

/// Input outside a function's mathematical domain (log of a nonpositive value).
class DomainError : public NumericalError {
public:
    explicit DomainError(const std::string& message) : NumericalError(message) {}
};

}  // namespace hype
