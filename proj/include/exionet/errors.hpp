#pragma once

#include <stdexcept>
#include <string>

namespace exionet {

/// Base of every error raised by the toolkit. `exit_code()` maps onto the CLI contract.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const noexcept { return 1; }
};

/// Malformed, missing or inconsistent input data.
class DataError : public Error {
public:
    using Error::Error;
};

/// Singular or ill-conditioned systems.
class NumericalError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 2; }
};

/// Bad command line or configuration.
class UsageError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 3; }
};

} // namespace exionet
