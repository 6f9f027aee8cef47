#pragma once

#include <stdexcept>
#include <string>

namespace eeb {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Contract parameters violate an ordering or positivity requirement.
class InvalidSpec : public Error {
public:
    using Error::Error;
};

/// Evaluation requested outside the valid time or state range (e.g. t > T).
class OutOfRange : public Error {
public:
    using Error::Error;
};

/// Average drifts carry 1/t factors and cannot be evaluated at t = 0.
class SingularTime : public Error {
public:
    using Error::Error;
};

class NotImplemented : public Error {
public:
    using Error::Error;
};

/// A bonus-function piece could not be root-isolated.
class AnalysisError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    using Error::Error;
};

/// British boundary with q + mu_c <= 0.
class DegenerateDrift : public Error {
public:
    using Error::Error;
};

/// Operation not available for this derivative kind.
class Unsupported : public Error {
public:
    using Error::Error;
};

class Divergence : public Error {
public:
    Divergence(const std::string& what, int step, double residual)
        : Error(what), step_(step), residual_(residual) {}

    int step() const noexcept { return step_; }
    double residual() const noexcept { return residual_; }

private:
    int step_;
    double residual_;
};

}  // namespace eeb
