#pragma once

#include <stdexcept>
#include <string>

namespace vlmc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A tree file or in-memory tree violates a structural invariant.
struct InvalidTree : Error {
    using Error::Error;
};

// The past is too short to select a unique context.
struct UndeterminedContext : Error {
    using Error::Error;
};

// Power iteration failed to reach the fixed point within the iteration cap.
struct NoConvergence : Error {
    using Error::Error;
};

// Conditioning string has zero stationary mass.
struct ZeroMassString : Error {
    using Error::Error;
};

// Observed past has zero mass under the contaminated law.
struct ZeroMassPast : Error {
    using Error::Error;
};

// Some non-context string below the truncation level is never refined.
struct NoWitness : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

struct AlphabetMismatch : Error {
    using Error::Error;
};

struct LengthMismatch : Error {
    using Error::Error;
};

struct MissingContaminant : Error {
    using Error::Error;
};

}  // namespace vlmc
