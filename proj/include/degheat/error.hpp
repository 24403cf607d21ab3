#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace degheat {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or contract-violating input (bad file, bad grid, beta < 1, ...).
class InputError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure could not produce a valid result.
class SolverError : public Error {
public:
    using Error::Error;
};

/// The fixed-point operator left the admissible set at a specific time node:
/// a nonpositive flux, or a nonpositive flux datum where one is required.
class AdmissibilityError : public SolverError {
public:
    AdmissibilityError(const std::string& what, std::size_t node)
        : SolverError(what + " at node " + std::to_string(node)), node_(node) {}

    std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

} // namespace degheat
