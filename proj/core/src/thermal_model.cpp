#include "heatctrl/thermal_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "heatctrl/errors.hpp"

namespace heatctrl {

namespace {

constexpr double kRhoWater = 998.0;  // kg/m^3
constexpr double kTempLo = -30.0;
constexpr double kTempHi = 100.0;

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << "building parameter '" << name << "' must be positive and finite, got " << v;
        throw ConfigError(os.str());
    }
}

void check_band(double t, const char* name) {
    if (!(t >= kTempLo && t <= kTempHi)) {
        std::ostringstream os;
        os << "simulation diverged: " << name << " = " << t << " degC outside ["
           << kTempLo << ", " << kTempHi << "]";
        throw SimulationBlowupError(os.str());
    }
}

}  // namespace

BuildingParams derive_params(const RawBuildingParams& raw) {
    require_positive(raw.h_ve_tr, "h_ve_tr");
    require_positive(raw.c_bldg_specific, "c_bldg_specific");
    require_positive(raw.a_floor, "a_floor");
    require_positive(raw.h_room, "h_room");
    require_positive(raw.water_volume, "water_volume");
    require_positive(raw.h_rad_con, "h_rad_con");
    require_positive(raw.mdot_hp, "mdot_hp");
    require_positive(raw.cp_water, "cp_water");
    require_positive(raw.h_wall, "h_wall");
    if (!(raw.wall_split > 0.0 && raw.wall_split < 1.0)) {
        std::ostringstream os;
        os << "wall_split must lie in (0,1), got " << raw.wall_split;
        throw ConfigError(os.str());
    }
    if (!(raw.gain_zone_fraction >= 0.0 && raw.gain_zone_fraction <= 1.0)) {
        std::ostringstream os;
        os << "gain_zone_fraction must lie in [0,1], got " << raw.gain_zone_fraction;
        throw ConfigError(os.str());
    }

    BuildingParams p{};
    p.h_ve_tr = raw.h_ve_tr;
    p.c_bldg_specific = raw.c_bldg_specific;
    p.a_floor = raw.a_floor;
    p.h_room = raw.h_room;
    p.cap_bldg = raw.c_bldg_specific * raw.a_floor;
    p.cap_water = raw.water_volume * kRhoWater * raw.cp_water;
    p.h_rad_con = raw.h_rad_con;
    p.mdot_hp = raw.mdot_hp;
    p.cp_water = raw.cp_water;
    p.wall_split = raw.wall_split;
    p.h_wall = raw.h_wall;
    p.gain_zone_fraction = raw.gain_zone_fraction;
    p.variant = raw.variant;
    return p;
}

StateDerivative rhs_two_state(const BuildingState& s, const DisturbanceSample& d,
                              double t_hp_sup, const BuildingParams& p) {
    StateDerivative out;
    out.d_room = (d.q_gain + p.h_rad_con * (s.t_hp_ret - s.t_room) -
                  p.h_ve_tr * (s.t_room - d.t_amb)) /
                 p.cap_bldg;
    out.d_hp_ret = (p.mdot_hp * p.cp_water * (t_hp_sup - s.t_hp_ret) -
                    p.h_rad_con * (s.t_hp_ret - s.t_room)) /
                   p.cap_water;
    out.d_wall = out.d_room;  // wall node mirrors the room in this variant
    return out;
}

StateDerivative rhs_three_state(const BuildingState& s, const DisturbanceSample& d,
                                double t_hp_sup, const BuildingParams& p) {
    const double cap_zone = (1.0 - p.wall_split) * p.cap_bldg;
    const double cap_wall = p.wall_split * p.cap_bldg;
    const double q_zone = p.gain_zone_fraction * d.q_gain;
    const double q_wall = (1.0 - p.gain_zone_fraction) * d.q_gain;
    const double q_exchange = p.h_wall * (s.t_room - s.t_wall);

    StateDerivative out;
    out.d_room = (q_zone + p.h_rad_con * (s.t_hp_ret - s.t_room) - q_exchange) / cap_zone;
    out.d_wall = (q_wall + q_exchange - p.h_ve_tr * (s.t_wall - d.t_amb)) / cap_wall;
    out.d_hp_ret = (p.mdot_hp * p.cp_water * (t_hp_sup - s.t_hp_ret) -
                    p.h_rad_con * (s.t_hp_ret - s.t_room)) /
                   p.cap_water;
    return out;
}

StateDerivative rhs(const BuildingState& s, const DisturbanceSample& d, double t_hp_sup,
                    const BuildingParams& p) {
    return p.variant == ModelVariant::two_state ? rhs_two_state(s, d, t_hp_sup, p)
                                                : rhs_three_state(s, d, t_hp_sup, p);
}

BuildingState integrate_step(BuildingState s, const DisturbanceSample& d, double t_hp_sup,
                             const BuildingParams& p, double dt, double substep) {
    if (!(dt > 0.0) || !(substep > 0.0)) {
        throw ConfigError("integrate_step: dt and substep must be positive");
    }
    double t = 0.0;
    while (t < dt) {
        const double h = std::min(substep, dt - t);
        const StateDerivative k = rhs(s, d, t_hp_sup, p);
        s.t_room += h * k.d_room;
        s.t_wall += h * k.d_wall;
        s.t_hp_ret += h * k.d_hp_ret;
        check_band(s.t_room, "t_room");
        check_band(s.t_wall, "t_wall");
        check_band(s.t_hp_ret, "t_hp_ret");
        t += h;
    }
    if (p.variant == ModelVariant::two_state) {
        s.t_wall = s.t_room;
    }
    return s;
}

const char* to_string(ModelVariant v) {
    return v == ModelVariant::two_state ? "two_state" : "three_state";
}

ModelVariant model_variant_from_string(const std::string& name) {
    if (name == "two_state") return ModelVariant::two_state;
    if (name == "three_state") return ModelVariant::three_state;
    throw ConfigError("unknown model variant '" + name + "' (expected two_state|three_state)");
}

}  // namespace heatctrl
