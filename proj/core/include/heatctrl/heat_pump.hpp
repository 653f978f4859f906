#pragma once

#include <array>
#include <optional>

#include "heatctrl/thermal_model.hpp"

namespace heatctrl {

enum class HeatSource { air, ground };

// Carnot-based heat pump efficiency with exergetic derating, optionally
// replaced by a second-order polynomial fit in (t_hp_sup, t_source).
struct HeatPumpModel {
    double eta_wp = 0.45;  // exergetic efficiency, (0,1]
    double cop_min = 1.0;
    double cop_max = 8.0;
    HeatSource source = HeatSource::air;
    double source_temp_c = 10.0;  // fixed cold-side temperature for ground source
    // Coefficients for c0 + c1*Ts + c2*Ta + c3*Ts^2 + c4*Ts*Ta + c5*Ta^2 (degC inputs).
    std::optional<std::array<double, 6>> poly;
};

void validate(const HeatPumpModel& m);

// Cold-side temperature seen by the COP model: ambient for air source, the
// configured constant for ground source.
double source_temperature(const HeatPumpModel& m, double t_amb);

// COP clamped into [cop_min, cop_max]. Temperatures converted to Kelvin
// inside the Carnot ratio. Throws std::domain_error when the supply setpoint
// is not above the source temperature (non-heating regime).
double cop(const HeatPumpModel& m, double t_hp_sup, double t_amb);

struct HpPower {
    double q_th = 0.0;  // thermal power into the loop, W
    double p_el = 0.0;  // electrical power, W
    double cop = 0.0;   // 0 when the unit is off
};

// Thermal power from the loop temperature spread; electrical power via COP.
// A supply setpoint at or below the return temperature means the unit is off
// (zero power, COP not evaluated). Supply setpoints at or below the source
// temperature sit past the upper COP clamp and use cop_max.
HpPower hp_power(const HeatPumpModel& m, const BuildingParams& p, double t_hp_sup,
                 double t_hp_ret, double t_amb);

}  // namespace heatctrl
