#pragma once

#include <stdexcept>
#include <string>

namespace footeval {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A geometry or count violated a type invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Malformed input document. Carries the 1-based line/column when known (0 otherwise).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
        : Error(line ? what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"
                     : what),
          line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Caller passed arguments that are inconsistent with the operation's contract.
class UsageError : public Error {
public:
    using Error::Error;
};

/// A run configuration key is missing, unknown or out of range.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace footeval
