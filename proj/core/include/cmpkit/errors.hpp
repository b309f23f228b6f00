#pragma once

#include <stdexcept>
#include <string>

namespace cmpkit {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Precondition or invariant violation on an input value.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Evaluation requested outside the formula's domain (e.g. on a prism edge).
class DomainError : public Error {
public:
    using Error::Error;
};

/// FMR radicand went negative: the magnetization is not saturated at this field.
class UnsaturatedError : public Error {
public:
    UnsaturatedError(const std::string& what, double applied_field_t)
        : Error(what), applied_field_t(applied_field_t) {}
    double applied_field_t;
};

/// Lower polariton branch squared frequency went negative (g too large for this detuning).
class UnstableRegimeError : public Error {
public:
    using Error::Error;
};

/// Superradiant dispersion requested in the normal phase (g/omega < 0.5).
class PhaseValidityError : public Error {
public:
    using Error::Error;
};

/// Hopfield diamagnetic term diverges (magnon frequency zero with g, d nonzero).
class SingularDiamagneticError : public Error {
public:
    using Error::Error;
};

/// Filling factor undefined: the field map carries no energy.
class UndefinedFillingError : public Error {
public:
    using Error::Error;
};

/// Normal equations singular; `parameter` names the column that lost rank.
class RankDeficientError : public Error {
public:
    RankDeficientError(const std::string& what, std::string parameter)
        : Error(what), parameter(std::move(parameter)) {}
    std::string parameter;
};

/// File read/write failure; carries the offending path.
class IoError : public Error {
public:
    IoError(const std::string& what, std::string path)
        : Error(what), path(std::move(path)) {}
    std::string path;
};

} // namespace cmpkit
