// errors.hpp — exception types shared across modules.

#pragma once

#include <stdexcept>
#include <string>

namespace dimer {

struct NotHermitian : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NegativeRadicand : std::domain_error {
    using std::domain_error::domain_error;
};

struct BasisMismatch : std::logic_error {
    using std::logic_error::logic_error;
};

struct UnknownPreset : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A step left the state outside tolerance; the driver halves dt and retries.
struct StepRejected : std::runtime_error {
    double min_eigenvalue;
    explicit StepRejected(double mineig)
        : std::runtime_error("step rejected: positivity violated"), min_eigenvalue(mineig) {}
};

struct IntegrationFailed : std::runtime_error {
    double time;
    IntegrationFailed(const std::string& what, double t) : std::runtime_error(what), time(t) {}
};

}  // namespace dimer
