#pragma once

#include <stdexcept>
#include <string>

namespace lobvol {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input text (bad header, unparseable field). Carries a line number.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// A record violates a book invariant (crossed book, nonpositive volume, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Timestamps out of order.
class OrderingError : public Error {
public:
    using Error::Error;
};

// Caller passed an invalid argument.
class ParameterError : public Error {
public:
    using Error::Error;
};

// Not enough valid observations for the requested estimate.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

// Two series that must share a slot grid do not.
class AlignmentError : public Error {
public:
    using Error::Error;
};

// Numerical degeneracy (zero variance, non-positive-definite recursion, ...).
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace lobvol
