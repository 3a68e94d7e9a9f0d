#pragma once

#include <stdexcept>
#include <string>

namespace qlogic {

// Base for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input documents (logic, vector, term, DD, operator files).
class FormatError : public Error {
public:
    FormatError(const std::string& what, int line = 0, int column = 0)
        : Error(line > 0 ? "line " + std::to_string(line) +
                               (column > 0 ? ", column " + std::to_string(column) : std::string()) +
                               ": " + what
                         : what),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

// Inconsistent shapes: vector dimensions, Kronecker factors, term arities.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Input is well-formed but the requested computation has no valid answer
// (unbounded polyhedron, no two-valued states, non-Hermitian matrix, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

}  // namespace qlogic
