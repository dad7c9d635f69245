#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ns2d {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition (shape, symmetry, mean, ...).
class ContractError : public Error {
public:
    using Error::Error;
};

/// Experiment configuration is malformed or physically unresolved.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Non-finite values appeared while time stepping.
class BlowUpError : public Error {
public:
    BlowUpError(std::int64_t step, double time, const std::string& what)
        : Error("numerical blow-up at step " + std::to_string(step) + " (t=" + std::to_string(time) +
                "): " + what),
          step_(step), time_(time) {}

    std::int64_t step() const noexcept { return step_; }
    double time() const noexcept { return time_; }

private:
    std::int64_t step_;
    double time_;
};

}  // namespace ns2d
