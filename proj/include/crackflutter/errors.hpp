#pragma once

#include <stdexcept>
#include <string>

namespace crackflutter {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad caller-supplied argument (zero subdivisions, unknown boundary kind, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Value outside the domain of a function (z outside the plate thickness, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Material coefficients that produce a non-finite or non-physical value.
class InvalidCoefficientError : public Error {
public:
    using Error::Error;
};

/// Degenerate element or crack geometry.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Inconsistent DOF bookkeeping discovered during assembly.
class AssemblyError : public Error {
public:
    using Error::Error;
};

/// Eigensolver did not converge or produced an invalid result.
class SolverError : public Error {
public:
    using Error::Error;
};

/// Flutter bracket that does not straddle the onset of instability.
class InconsistencyError : public Error {
public:
    using Error::Error;
};

/// Invalid run configuration; the message names the offending field.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace crackflutter
