#pragma once

#include <stdexcept>
#include <string>

namespace ezguide {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Relative polar quantities are undefined when two points coincide.
class DegenerateRangeError : public Error {
public:
    explicit DegenerateRangeError(const std::string& what)
        : Error("degenerate range: " + what) {}
};

/// A parameter or domain invariant was violated (e.g. mu outside (0,1)).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Scenario document could not be parsed. Carries a 1-based location.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line, int column)
        : Error(format(msg, line, column)), line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    static std::string format(const std::string& msg, int line, int column) {
        if (line <= 0) return msg;
        return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg;
    }

    int line_;
    int column_;
};

}  // namespace ezguide
