#pragma once

#include <stdexcept>
#include <string>

namespace cwkb {

/* Configuration / input validation problems. The CLI maps these to exit
   code 2. */
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/* Any numerical failure (divergence, non-convergence, unsatisfied support
   preconditions). The CLI maps these to exit code 3. */
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/* Trajectory left the configured magnitude bound. */
struct DivergenceError : NumericError {
    explicit DivergenceError(const std::string& what) : NumericError(what) {}
};

/* Newton shooting failed to reach the residual tolerance. */
struct SolverError : NumericError {
    SolverError(const std::string& what, double best_residual)
        : NumericError(what), best_residual(best_residual) {}
    double best_residual;
};

/* Quadrature failed its convergence check. */
struct QuadratureError : NumericError {
    explicit QuadratureError(const std::string& what) : NumericError(what) {}
};

/* Grid does not cover the state's support. */
struct SupportError : NumericError {
    explicit SupportError(const std::string& what) : NumericError(what) {}
};

/* Quadratic expansion of an action is invalid at the requested width. */
struct ExpansionError : NumericError {
    explicit ExpansionError(const std::string& what) : NumericError(what) {}
};

}  // namespace cwkb
