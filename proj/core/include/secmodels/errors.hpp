#pragma once

#include <stdexcept>
#include <string>

namespace secmodels {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (t <= 0, lo > hi, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Input data is malformed or insufficient for the requested fit.
class DataError : public Error {
public:
    using Error::Error;
};

/// A user callback or model returned a non-finite value.
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// An integral or process is divergent for the given parameters.
class DivergenceError : public Error {
public:
    using Error::Error;
};

/// Operands are expressed on incompatible unit bases.
class UnitError : public Error {
public:
    using Error::Error;
};

/// Model parameters produce a value outside its legal range.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A valid set of parameters that the requested operation cannot handle.
class ConfigurationError : public Error {
public:
    using Error::Error;
};

}  // namespace secmodels
