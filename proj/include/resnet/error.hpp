#pragma once

#include <stdexcept>
#include <string>

namespace resnet {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parameters outside the documented range.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Graph fails one of the conductance-graph invariants.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Iterative method did not reach its tolerance, or a numerical precondition failed.
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}

    double residual() const { return residual_; }

private:
    double residual_;
};

}  // namespace resnet
