#pragma once

#include <stdexcept>
#include <string>

namespace heatctrl {

// Invalid configuration or input data (bad config file, malformed CSV,
// parameter out of range). CLI maps this family to exit code 1.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// The thermal simulation left its plausibility band. CLI exit code 2.
struct SimulationBlowupError : std::runtime_error {
    explicit SimulationBlowupError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite values appeared during training. CLI exit code 2.
struct TrainingDivergenceError : std::runtime_error {
    explicit TrainingDivergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace heatctrl
