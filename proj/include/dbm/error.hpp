#pragma once

#include <stdexcept>
#include <string>

namespace dbm {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input file. Message carries file and line context.
class ParseError : public Error {
public:
    using Error::Error;
};

// Input is syntactically fine but geometrically unusable
// (too few points, zero chord, non-monotone surface, ...).
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

// Two collocated airfoils were combined but live on different grids.
class GridMismatchError : public Error {
public:
    using Error::Error;
};

// API misuse detected at runtime (size mismatches, bad arguments).
class ContractError : public Error {
public:
    using Error::Error;
};

// Common base for shape construction failures that optimizers score as failed
// rather than treat as fatal.
class ShapeError : public Error {
public:
    using Error::Error;
};

// Weight vector sums to (nearly) zero, so the morph normalization blows up.
class DegenerateWeightsError : public ShapeError {
public:
    using ShapeError::ShapeError;
};

// Self-intersection repair hit its pass cap without producing a clean outline.
class NonRepairableError : public ShapeError {
public:
    using ShapeError::ShapeError;
};

// An aerodynamic evaluation produced no usable polar.
class EvaluationError : public Error {
public:
    using Error::Error;
};

// Bad or incomplete run configuration (also: missing external binary).
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace dbm
