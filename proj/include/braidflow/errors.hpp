#pragma once

#include <stdexcept>
#include <string>

namespace braidflow {

// Base for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad arguments or evaluation outside the supported domain.
class DomainError : public Error {
public:
    using Error::Error;
};

// Configuration or profile-constraint failures.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Numerical failures: quadrature non-convergence, NaN during integration,
// winding-resolution failures, strand collisions.
class NumericError : public Error {
public:
    using Error::Error;
};

// Two strands closer than the collision tolerance.
class CollisionError : public NumericError {
public:
    using NumericError::NumericError;
};

// Angle unwrapping did not land on an integer degree; refine the grid.
class ResolutionError : public NumericError {
public:
    using NumericError::NumericError;
};

// System shape outside what an analysis supports (e.g. non-radial
// classification, non-simple loops, non-contractible strands).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

}  // namespace braidflow
