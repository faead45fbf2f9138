#pragma once

#include <stdexcept>
#include <string>

namespace qrc {

// Base type for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Register size exceeds a hard capacity limit (dense amplitudes are 2^n).
struct CapacityError : Error {
    using Error::Error;
};

// Qubit/classical-bit index out of range, duplicated, or mismatched.
struct IndexError : Error {
    using Error::Error;
};

// Numeric contract violated: non-unitary matrix, unnormalized amplitudes,
// non-finite input, invalid probability.
struct ValidationError : Error {
    using Error::Error;
};

// Reservoir scheme contract broken: missing measurement where the scheme
// requires one, inconsistent feature width across timesteps.
struct SchemeError : Error {
    using Error::Error;
};

// Model output cannot be mapped back onto the series' value kind.
struct DecodeError : Error {
    using Error::Error;
};

// Experiment configuration problem; the message names the offending key.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace qrc
