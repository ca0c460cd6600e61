#pragma once

#include <stdexcept>
#include <string>

namespace thetaforge {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Vector/matrix size mismatch in an exact-arithmetic routine.
struct DimensionError : Error {
    using Error::Error;
};

// Weight lies on a reflection or affine wall; the affine action has a stabilizer there.
struct SingularWeightError : Error {
    using Error::Error;
};

// Evaluation point too close to a zero of sigma or theta^-_{rho,n}.
struct SingularLocusError : Error {
    using Error::Error;
};

// A configured hard cap was hit (group order, truncation radius, iteration count).
struct ResourceError : Error {
    using Error::Error;
};

// Quadrature refinement did not stabilize within the configured limits.
struct ConvergenceError : Error {
    using Error::Error;
};

}  // namespace thetaforge
