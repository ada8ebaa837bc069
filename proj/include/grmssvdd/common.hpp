#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace grmssvdd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A precondition on values was violated (empty input, bad range, ...).
struct InvalidInput : Error {
    using Error::Error;
};

/// Dimensions of an argument do not match what the operation expects.
struct ShapeMismatch : Error {
    using Error::Error;
};

/// Data has no usable variation (zero standard deviation, ...).
struct DegenerateData : Error {
    using Error::Error;
};

/// Centered kernel matrix has no eigenvalue above the retention threshold.
struct DegenerateKernel : Error {
    using Error::Error;
};

/// Box parameter C is too small for the simplex constraint to be feasible.
struct InfeasibleC : Error {
    using Error::Error;
};

/// Operation was called for a configuration it does not handle.
struct WrongPath : Error {
    using Error::Error;
};

}  // namespace grmssvdd
