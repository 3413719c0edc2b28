#pragma once

#include <stdexcept>
#include <string>

namespace su2flux {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation left its mathematical domain (division by zero, singular
/// metric, violated precondition on the input data).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Dimension or shape mismatch between operands.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// An evaluation point violates a quadratic defining relation.
class RelationError : public Error {
public:
    using Error::Error;
};

/// A denominator vanishes at an evaluation point.
class PoleError : public Error {
public:
    using Error::Error;
};

/// A SUSY solution failed verification where a verified one was required.
class InvalidSolutionError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, int line, int column)
        : Error(format(message, line, column)), line_(line), column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;

    static std::string format(const std::string& message, int line, int column) {
        if (line > 0) {
            return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
        }
        return "column " + std::to_string(column) + ": " + message;
    }
};

class UndeclaredSymbolError : public ParseError {
public:
    UndeclaredSymbolError(const std::string& symbol, int line, int column)
        : ParseError("undeclared symbol '" + symbol + "'", line, column), symbol_(symbol) {}

    const std::string& symbol() const { return symbol_; }

private:
    std::string symbol_;
};

}  // namespace su2flux
