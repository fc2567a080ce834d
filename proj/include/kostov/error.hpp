#pragma once

#include <stdexcept>
#include <string>

namespace kostov {

// Base class of all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Inverse of a non-unit, mixed dimensions, malformed arguments.
class AlgebraError : public Error {
public:
    using Error::Error;
};

// A requested coefficient lies beyond what the truncation orders determine.
class TruncationError : public Error {
public:
    using Error::Error;
};

// Input text could not be parsed or violates the family invariants.
class InputError : public Error {
public:
    InputError(const std::string& msg, int line = 0, int column = 0)
        : Error(line > 0 ? msg + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"
                         : msg),
          line_(line), column_(column)
    {
    }
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

// Numeric evaluation hit a pole or an integration left its domain.
class NumericError : public Error {
public:
    using Error::Error;
};

// A precondition of an operation on the normal-form machinery does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

} // namespace kostov
