#include "heatctrl/heat_pump.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "heatctrl/errors.hpp"

namespace heatctrl {

namespace {
constexpr double kKelvinOffset = 273.15;
}

void validate(const HeatPumpModel& m) {
    if (!(m.eta_wp > 0.0 && m.eta_wp <= 1.0)) {
        throw ConfigError("heat pump eta_wp must lie in (0,1]");
    }
    if (!(m.cop_min >= 1.0 && m.cop_min < m.cop_max)) {
        throw ConfigError("heat pump COP clamps require 1 <= cop_min < cop_max");
    }
}

double source_temperature(const HeatPumpModel& m, double t_amb) {
    return m.source == HeatSource::ground ? m.source_temp_c : t_amb;
}

double cop(const HeatPumpModel& m, double t_hp_sup, double t_amb) {
    const double t_src = source_temperature(m, t_amb);
    if (!(t_hp_sup > t_src)) {
        std::ostringstream os;
        os << "cop: supply " << t_hp_sup << " degC not above source " << t_src
           << " degC (non-heating regime)";
        throw std::domain_error(os.str());
    }
    double raw;
    if (m.poly) {
        const auto& c = *m.poly;
        raw = c[0] + c[1] * t_hp_sup + c[2] * t_src + c[3] * t_hp_sup * t_hp_sup +
              c[4] * t_hp_sup * t_src + c[5] * t_src * t_src;
    } else {
        const double sup_k = t_hp_sup + kKelvinOffset;
        raw = m.eta_wp * sup_k / (t_hp_sup - t_src);
    }
    return std::clamp(raw, m.cop_min, m.cop_max);
}

HpPower hp_power(const HeatPumpModel& m, const BuildingParams& p, double t_hp_sup,
                 double t_hp_ret, double t_amb) {
    HpPower out;
    out.q_th = std::max(0.0, p.mdot_hp * p.cp_water * (t_hp_sup - t_hp_ret));
    if (out.q_th == 0.0) {
        return out;  // unit off
    }
    const double t_src = source_temperature(m, t_amb);
    out.cop = t_hp_sup > t_src ? cop(m, t_hp_sup, t_amb) : m.cop_max;
    out.p_el = out.q_th / out.cop;
    return out;
}

}  // namespace heatctrl
