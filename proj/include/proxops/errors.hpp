#pragma once

#include <stdexcept>
#include <string>

namespace proxops {

// Scenario/config input problems (bad keys, units, missing files). CLI maps these to exit code 4.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failures: non-convergence, step underflow, singular geometry. Exit code 3.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Hard mission-constraint violations detected by validation. Exit code 2.
struct ConstraintError : std::runtime_error {
    explicit ConstraintError(const std::string& msg) : std::runtime_error(msg) {}
};

// Measurement schedule cannot be realized on the given plan (arc too short etc).
struct ScheduleError : std::runtime_error {
    explicit ScheduleError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace proxops
