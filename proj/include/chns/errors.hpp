#pragma once

#include <stdexcept>
#include <string>

namespace chns {

// Configuration / input documents. `line` is 1-based when known, -1 otherwise.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what, int line_ = -1)
        : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + what : what),
          line(line_) {}
    int line;
};

// A state field violated an invariant (negative values, NaN, shape mismatch).
struct StateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An iterative solve hit its iteration cap.
struct SolverError : std::runtime_error {
    SolverError(const std::string& what, double residual_, int iterations_)
        : std::runtime_error(what + " (residual " + std::to_string(residual_) + " after " +
                             std::to_string(iterations_) + " iterations)"),
          residual(residual_),
          iterations(iterations_) {}
    double residual;
    int iterations;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace chns
