#pragma once

#include <stdexcept>
#include <string>

namespace ordmix {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (q outside [0,1],
/// lambda outside [-1,1], nonpositive rate, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Survival probability is zero, so hazards and residual-life quantities are
/// undefined at the requested point.
class SupportExhausted : public Error {
public:
    using Error::Error;
};

class UnsupportedOrder : public Error {
public:
    using Error::Error;
};

class UnsupportedCoupling : public Error {
public:
    using Error::Error;
};

class WrongCoupling : public Error {
public:
    using Error::Error;
};

class EmptySample : public Error {
public:
    using Error::Error;
};

class NonConvergence : public Error {
public:
    using Error::Error;
};

namespace detail {

inline void require_lambda(double lambda)
{
    // NaN fails both comparisons
    if (!(lambda >= -1.0 && lambda <= 1.0))
        throw DomainError("lambda must lie in [-1, 1], got " + std::to_string(lambda));
}

inline void require_positive(double value, const char* what)
{
    if (!(value > 0.0))
        throw DomainError(std::string(what) + " must be > 0, got " + std::to_string(value));
}

inline void require_probability(double q)
{
    if (!(q >= 0.0 && q <= 1.0))
        throw DomainError("probability must lie in [0, 1], got " + std::to_string(q));
}

} // namespace detail
} // namespace ordmix
