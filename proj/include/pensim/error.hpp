#pragma once

#include <stdexcept>
#include <string>

namespace pensim {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Key (e.g. a CPI year) missing from a lookup table.
class LookupError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Malformed or inconsistent input data (CSV, config values).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Config failed validation; field() names the offending key.
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// Numerical failure: no bracket, degenerate regression, non-monotone root.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BracketError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonMonotoneError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class UndefinedRSquaredError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace pensim
