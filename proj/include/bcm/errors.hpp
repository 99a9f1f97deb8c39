#pragma once

#include <stdexcept>
#include <string>

namespace bcm {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed grid or grid too small for the requested stencil.
class GridError : public Error {
public:
    using Error::Error;
};

/// Volterra equation whose diagonal coefficient vanishes.
class SingularEquation : public Error {
public:
    using Error::Error;
};

/// Dense system judged numerically singular.
class NonInvertible : public Error {
public:
    NonInvertible(const std::string& what, double condition)
        : Error(what), condition_(condition) {}
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

/// An argument violates an operation's precondition (domain conditions,
/// incompatible medium/method, kernel too short, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Time step violates the CFL bound of the explicit scheme.
class CflViolation : public Error {
public:
    using Error::Error;
};

/// Scattering set-up whose recording window can see the artificial boundary.
class WindowError : public Error {
public:
    using Error::Error;
};

/// Data rejected by the positivity test of the connecting operator.
class InadmissibleData : public Error {
public:
    using Error::Error;
};

/// Degenerate normaliser while building a classical kernel.
class DegenerateKernel : public Error {
public:
    using Error::Error;
};

/// Malformed input file.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace bcm
