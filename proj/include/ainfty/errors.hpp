#pragma once

#include <stdexcept>
#include <string>

namespace ainfty {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A class (omega, maslov) that is not in the monoid closure, or an undeclared id.
class UnknownClassError : public Error {
public:
    using Error::Error;
};

class InvalidTableError : public Error {
public:
    using Error::Error;
};

class InvalidContractionError : public Error {
public:
    using Error::Error;
};

class InvalidMetricError : public Error {
public:
    using Error::Error;
};

/// The shooting problem produced a solution whose linearization is singular
/// even at the largest permitted perturbation amplitude.
class PerturbationInsufficientError : public Error {
public:
    using Error::Error;
};

class StepUnderflowError : public Error {
public:
    using Error::Error;
};

class MergeError : public Error {
public:
    using Error::Error;
};

/// Syntax or semantic error in textual input; carries a 1-based line number (0 if unknown).
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace ainfty
