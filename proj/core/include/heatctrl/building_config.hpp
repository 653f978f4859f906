#pragma once

#include <string>

#include "heatctrl/disturbance.hpp"
#include "heatctrl/heat_pump.hpp"
#include "heatctrl/thermal_model.hpp"

namespace heatctrl {

// One building document: thermal parameters, heat pump block, gains block.
struct BuildingConfig {
    std::string name;
    BuildingParams params;
    HeatPumpModel heat_pump;
    GainsConfig gains;
};

// Loads and validates a building JSON document. Field-level ConfigError on
// missing or out-of-range values.
BuildingConfig load_building_config(const std::string& path);
BuildingConfig parse_building_config(const std::string& json_text, const std::string& origin);

}  // namespace heatctrl
