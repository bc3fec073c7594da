#pragma once

#include <stdexcept>
#include <string>

namespace sosround {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error {
    using Error::Error;
};

struct InvalidInstance : Error {
    using Error::Error;
};

struct DegreeError : Error {
    using Error::Error;
};

// Conditioning on a variable whose denominator pE[1 + b X_i] is below cond_tol.
struct ConditioningError : Error {
    using Error::Error;
};

struct PsdError : Error {
    using Error::Error;
};

// Hollowize exhausted its budget with a bad vertex remaining.
struct NullStepError : Error {
    using Error::Error;
};

struct BracketError : Error {
    using Error::Error;
};

struct SolverError : Error {
    using Error::Error;
};

// ARV procedures: candidate set too small or no separation found.
struct ArvError : Error {
    using Error::Error;
};

struct OracleCapError : Error {
    using Error::Error;
};

}  // namespace sosround
