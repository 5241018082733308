#pragma once

#include <stdexcept>
#include <string>

namespace bilattice {

/// Base class for all numerical-contract violations in this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Evaluation requested at a pole of the function (e.g. gamma at -2).
struct PoleError : Error {
    using Error::Error;
};

/// A certified series/tail bound could not be met within the term budget.
struct PrecisionError : Error {
    using Error::Error;
};

/// Parameters outside the validity range of a family/lattice combination.
struct ValidityError : Error {
    using Error::Error;
};

/// Parameter combination degenerates to a classical case handled elsewhere.
struct DegenerateError : Error {
    using Error::Error;
};

/// Sequence arguments of mismatched lengths.
struct LengthError : Error {
    using Error::Error;
};

/// Gram/normalization data lost all significance (truncation or precision too small).
struct RankError : Error {
    using Error::Error;
};

/// Fewer sign changes than polynomial degree during zero bracketing.
struct ZeroCountError : Error {
    using Error::Error;
};

/// A scan that must be strictly monotone was not.
struct MonotonicityError : Error {
    using Error::Error;
};

/// The discrete Painleve flow hit a movable singularity at a concrete index.
struct SingularityError : Error {
    long index;
    SingularityError(const std::string& msg, long idx) : Error(msg), index(idx) {}
};

}  // namespace bilattice
