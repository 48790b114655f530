#pragma once

#include <stdexcept>
#include <string>

namespace stackkit {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Stack is not a valid resting single-stranded tower (z chain broken, missing
// contact, bad shape dimensions).
struct InvalidStackError : Error {
    using Error::Error;
};

// Footprints of two consecutive objects do not touch.
struct NoContactError : Error {
    using Error::Error;
};

// Scenario spec is infeasible by construction (e.g. VPSF with cubes only).
struct InvalidSpecError : Error {
    using Error::Error;
};

struct GenerationExhaustedError : Error {
    using Error::Error;
};

struct SchemaError : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct HashMismatchError : Error {
    using Error::Error;
};

struct DegenerateDatasetError : Error {
    using Error::Error;
};

struct EmptyPoolError : Error {
    using Error::Error;
};

}  // namespace stackkit
