#pragma once

#include <string>

namespace heatctrl {

enum class ModelVariant { two_state, three_state };

// Raw inputs as they appear in a building config document. Capacities are
// derived from these by derive_params().
struct RawBuildingParams {
    double h_ve_tr = 0.0;           // transmission + ventilation heat loss, W/K
    double c_bldg_specific = 0.0;   // specific building heat capacity, J/(m^2 K)
    double a_floor = 0.0;           // conditioned floor area, m^2
    double h_room = 0.0;            // average room height, m
    double water_volume = 0.0;      // heating-loop water volume, m^3
    double h_rad_con = 0.0;         // emission system heat transfer, W/K
    double mdot_hp = 0.0;           // heating-loop mass flow, kg/s
    double cp_water = 4186.0;       // J/(kg K)
    double wall_split = 0.5;        // wall share of cap_bldg, three-state only
    double h_wall = 0.0;            // zone<->wall heat transfer, W/K
    double gain_zone_fraction = 1.0;  // share of gains entering the zone node
    ModelVariant variant = ModelVariant::three_state;
};

struct BuildingParams {
    double h_ve_tr;
    double c_bldg_specific;
    double a_floor;
    double h_room;
    double cap_bldg;   // c_bldg_specific * a_floor, J/K
    double cap_water;  // water_volume * rho_water * cp_water, J/K
    double h_rad_con;
    double mdot_hp;
    double cp_water;
    double wall_split;
    double h_wall;
    double gain_zone_fraction;
    ModelVariant variant;
};

// Temperatures in degC. The two-state model carries t_wall equal to t_room.
struct BuildingState {
    double t_room = 20.0;
    double t_wall = 20.0;
    double t_hp_ret = 25.0;
};

// Time derivative of the state, K/s per component.
struct StateDerivative {
    double d_room = 0.0;
    double d_wall = 0.0;
    double d_hp_ret = 0.0;
};

struct DisturbanceSample {
    double t_amb = 0.0;   // degC
    double q_gain = 0.0;  // W, internal + solar, >= 0
};

// Validates raw inputs and fills the derived capacities.
// Throws ConfigError on non-positive inputs or wall_split outside (0,1).
BuildingParams derive_params(const RawBuildingParams& raw);

// Lumped RC dynamics. Pure functions; safe to call concurrently.
StateDerivative rhs_two_state(const BuildingState& s, const DisturbanceSample& d,
                              double t_hp_sup, const BuildingParams& p);
StateDerivative rhs_three_state(const BuildingState& s, const DisturbanceSample& d,
                                double t_hp_sup, const BuildingParams& p);
StateDerivative rhs(const BuildingState& s, const DisturbanceSample& d, double t_hp_sup,
                    const BuildingParams& p);

// Explicit-Euler sub-stepped advance over dt seconds with the disturbance held
// constant (zero-order hold). A final partial substep is taken when substep
// does not divide dt. Throws SimulationBlowupError when any temperature
// leaves [-30, 100] degC.
BuildingState integrate_step(BuildingState s, const DisturbanceSample& d, double t_hp_sup,
                             const BuildingParams& p, double dt = 900.0, double substep = 60.0);

const char* to_string(ModelVariant v);
ModelVariant model_variant_from_string(const std::string& name);

}  // namespace heatctrl
