#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vibrobeam {

// Raised by the time integrators. `time()` is the simulation time at which
// the integrator gave up.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double t)
        : std::runtime_error(what), t_(t) {}

    double time() const noexcept { return t_; }

private:
    double t_;
};

class StepSizeUnderflow : public IntegrationError {
public:
    using IntegrationError::IntegrationError;
};

class DivergenceError : public IntegrationError {
public:
    using IntegrationError::IntegrationError;
};

// Fixed-step Newton failure; carries the index of the offending step.
class NewtonFailure : public IntegrationError {
public:
    NewtonFailure(const std::string& what, double t, std::size_t step)
        : IntegrationError(what, t), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

// Configuration problems, reported with the offending key and line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& key, int line, const std::string& message);

    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; }

private:
    std::string key_;
    int line_;
};

} // namespace vibrobeam
