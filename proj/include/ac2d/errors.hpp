#pragma once

#include <stdexcept>
#include <string>

namespace ac2d {

// Process exit codes used by the CLI.
enum class ExitCode : int {
    ok = 0,
    config_error = 2,
    numerical_abort = 3,
    io_error = 4,
};

/// Invalid or inconsistent configuration; `constraint` names the violated rule.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string constraint, const std::string& what)
        : std::runtime_error(what), constraint_(std::move(constraint))
    {
    }
    const std::string& constraint() const { return constraint_; }

private:
    std::string constraint_;
};

/// Non-finite values in a trajectory. Carries the Monte Carlo sample index
/// when raised from an experiment (-1 otherwise).
class NumericalAbort : public std::runtime_error {
public:
    explicit NumericalAbort(const std::string& what, long sample = -1)
        : std::runtime_error(what), sample_(sample)
    {
    }
    long sample() const { return sample_; }

private:
    long sample_;
};

/// A transform grid would exceed the configured memory cap.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ac2d
