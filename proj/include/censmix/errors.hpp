#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace censmix {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Configuration / usage problems (bad arguments, capacity limits).
struct ConfigError : Error {
    using Error::Error;
};

// Requested polynomial degree exceeds the configured maximum.
struct CapacityError : ConfigError {
    using ConfigError::ConfigError;
};

// Numerical failures (ill-conditioning, non-convergence, degeneracy).
struct NumericalError : Error {
    using Error::Error;
};

struct IllConditioningError : NumericalError {
    using NumericalError::NumericalError;
};

struct ConvergenceError : NumericalError {
    using NumericalError::NumericalError;
    std::vector<double> last_iterate;
    double infeasibility = 0.0;
    ConvergenceError(const std::string& msg, std::vector<double> iterate, double infeas)
        : NumericalError(msg), last_iterate(std::move(iterate)), infeasibility(infeas) {}
};

struct DegenerateWindowError : NumericalError {
    using NumericalError::NumericalError;
};

struct DegenerateDeterminantError : NumericalError {
    using NumericalError::NumericalError;
};

struct DegenerateSupportError : NumericalError {
    using NumericalError::NumericalError;
};

struct EmptyInputError : ConfigError {
    using ConfigError::ConfigError;
};

// Wraps an error thrown by a pipeline stage, labeling the stage.
struct PipelineError : Error {
    std::string stage;
    PipelineError(const std::string& stage_name, const std::string& msg)
        : Error("[" + stage_name + "] " + msg), stage(stage_name) {}
};

}  // namespace censmix
