#pragma once

#include <stdexcept>
#include <string>

namespace sigma {

// Base of everything the library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input: out-of-range parameters, unknown names, s outside a domain.
struct ValidationError : Error {
    using Error::Error;
};

struct DomainError : ValidationError {
    using ValidationError::ValidationError;
};

// A quantity needing 1/r was requested where r vanishes.
struct SingularityError : Error {
    using Error::Error;
};

// e^{i alpha} + <W,x> == 0, the angle has no argument.
struct UndefinedAngleError : Error {
    using Error::Error;
};

// Quadrature / root finding / integration could not deliver.
struct NumericError : Error {
    using Error::Error;
};

// Internal consistency violated (signals corrupted upstream data).
struct InternalError : Error {
    using Error::Error;
};

}  // namespace sigma
