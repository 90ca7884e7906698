#pragma once

#include <stdexcept>
#include <string>

namespace graphon {

/// Numerical tolerances shared by every module.
inline constexpr double kAlgebraicTol = 1e-12;
inline constexpr double kSpectralTol = 1e-9;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad dimensions, asymmetric values, bad weights, bad file schema.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// An exact enumeration was requested beyond its configured size limit.
class LimitError : public Error {
public:
    using Error::Error;
};

/// Homomorphism enumeration would exceed the assignment budget.
class BudgetError : public Error {
public:
    using Error::Error;
};

/// An iterative eigensolver hit its iteration cap.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, long iterations, double residual)
        : Error(what), iterations_(iterations), residual_(residual) {}

    long iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    long iterations_;
    double residual_;
};

} // namespace graphon
