#pragma once

#include <stdexcept>
#include <string>

namespace cgs {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Root finding was asked for a polynomial whose coefficients are all zero.
class IdenticallyZero : public Error {
public:
    using Error::Error;
};

// Root finding failed to converge.
class RootFailure : public Error {
public:
    using Error::Error;
};

// Conjugate evaluation was called on an interval where the derivative is
// decreasing, i.e. the caller's convexity guarantee is broken.
class NotConvexOnInterval : public Error {
public:
    using Error::Error;
};

// The slope bracket for bitangent bisection does not satisfy the required
// sign conditions, or the bisection hit its iteration cap.
class BracketFailure : public Error {
public:
    using Error::Error;
};

// Evaluation point lies outside the admissible domain.
class OutOfDomain : public Error {
public:
    using Error::Error;
};

// Input vector length does not match the model dimension.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// Malformed serialized input.
class ParseError : public Error {
public:
    using Error::Error;
};

// A link function changes direction on the interval of interest.
class NotMonotone : public Error {
public:
    NotMonotone(const std::string& msg, double where)
        : Error(msg), where(where) {}
    double where;  // location of the offending sign change
};

}  // namespace cgs
