#pragma once

#include <stdexcept>
#include <string>

namespace qset {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

// An inverse problem (feature fit, crossover search) has no admissible solution.
class NoSolution : public Error {
public:
    using Error::Error;
};

// Singular systems, non-convergence, bracket growth exhausted.
class NumericalError : public Error {
public:
    using Error::Error;
};

// A request would exceed a configured work/memory cap.
class ResourceError : public Error {
public:
    using Error::Error;
};

class NoTelegraphDetected : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace qset
