#pragma once

#include <stdexcept>
#include <string>

namespace stepprop {

// Bad input or out-of-contract call. The CLI maps these to exit status 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Evaluation at a pole of Gamma or of the analytically continued potential.
class SingularityError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Numerical failure: series/quadrature/Newton did not reach tolerance, or no
// solution exists where one was requested. The CLI maps these to exit status 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NoSolutionError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class CausticError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace stepprop
