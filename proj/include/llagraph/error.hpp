#pragma once

#include <stdexcept>
#include <string>

namespace llagraph {

/// Malformed arguments or data: bad shapes, non-finite entries, out-of-range indices.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A matrix argument outside the function's mathematical domain (e.g. not positive definite).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Numerical breakdown inside a solver column update.
class DegeneracyError : public std::runtime_error {
public:
    DegeneracyError(const std::string& what, int column)
        : std::runtime_error(what), column_(column) {}

    int column() const noexcept { return column_; }

private:
    int column_;
};

/// A structure specification that cannot produce a valid precision matrix.
class ConstructionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace llagraph
