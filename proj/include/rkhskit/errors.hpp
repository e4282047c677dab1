#pragma once

#include <stdexcept>
#include <string>

namespace rkhs {

// Bad or inconsistent input: malformed files, out-of-domain points,
// dimension mismatches. Maps to CLI exit code 2.
class InvalidInput : public std::runtime_error {
public:
    explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

// A solver could not produce a valid result: singular systems,
// non-convergence, non-finite iterates. Maps to CLI exit code 3.
class SolverFailure : public std::runtime_error {
public:
    explicit SolverFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rkhs
