#pragma once

#include <stdexcept>
#include <string>

namespace vectorix {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Pivot collapsed below the singularity threshold, or a channel matrix is
/// otherwise unusable (e.g. zero diagonal element for diagonal precoding).
class SingularMatrixError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// Channel file is malformed; `line` is the 1-based offending line number.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, long line_number)
        : Error("line " + std::to_string(line_number) + ": " + msg), line(line_number) {}
    long line;
};

/// Iterative algorithm (LLL) exceeded its iteration cap.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

} // namespace vectorix
