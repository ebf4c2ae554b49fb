#pragma once

#include <stdexcept>
#include <string>

namespace paramix {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or schema-violating configuration. CLI exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Singular systems, missing dips, unidentifiable fits. CLI exit code 3.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Argument outside the documented domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

}  // namespace paramix
