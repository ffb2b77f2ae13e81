#pragma once

#include <stdexcept>
#include <string>

namespace els {

/// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Two fields with different grids were combined.
struct GridMismatch : Error {
    using Error::Error;
};

/// A NaN or infinity showed up where finite data is required.
struct NonFinite : Error {
    using Error::Error;
};

/// A director field strayed too far from unit length for the requested operation.
struct UnnormalizedDirector : Error {
    using Error::Error;
};

/// Two internally redundant computations of the same quantity disagree.
struct ConsistencyFailure : Error {
    using Error::Error;
};

/// The unit-length constraint degraded beyond the acceptance threshold during a run.
struct ConstraintDrift : Error {
    using Error::Error;
};

/// Coefficient set failed validation but a derived quantity that requires it was requested.
struct InvalidCoefficients : Error {
    using Error::Error;
};

/// A matrix argument that must be symmetric is not.
struct NotSymmetric : Error {
    using Error::Error;
};

/// A matrix argument that must be trace-free is not.
struct NotTraceFree : Error {
    using Error::Error;
};

/// Initial-data generator name not recognized.
struct UnknownGenerator : Error {
    using Error::Error;
};

/// Malformed input file (JSON syntax, checkpoint magic/layout, CSV shape).
struct ParseError : Error {
    using Error::Error;
};

/// Config parsed fine but the values are unusable; message lists every offending path.
struct ValidationError : Error {
    using Error::Error;
};

/// Filesystem trouble: cannot open, read, or write.
struct IoError : Error {
    using Error::Error;
};

} // namespace els
