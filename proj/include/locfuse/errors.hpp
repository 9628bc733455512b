#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace locfuse {

/// Invalid scenario, preset, grid, or other user-supplied configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller broke a documented precondition (e.g. frequency out of bounds).
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A measurement was staged with a timestamp later than the IMU tick consuming it.
class StagingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Singular innovation covariance or non-finite filter output.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what, std::int64_t tick = -1)
        : std::runtime_error(tick >= 0 ? what + " (tick " + std::to_string(tick) + ")" : what),
          tick_(tick) {}

    /// Simulation tick at which the failure occurred, -1 when unknown.
    std::int64_t tick() const noexcept { return tick_; }

private:
    std::int64_t tick_;
};

}  // namespace locfuse
