#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "heatctrl/thermal_model.hpp"

namespace heatctrl {

// Time-indexed exogenous inputs on a fixed grid. Indexing wraps around the
// series length, so an annual profile repeats seamlessly. Immutable after
// construction; shareable across threads.
struct DisturbanceSeries {
    std::int64_t start_unix_s = 0;  // UTC
    double step_s = 900.0;
    std::vector<double> t_amb;      // degC
    std::vector<double> q_gain;     // W
    std::vector<double> solar_wm2;  // retained for gains synthesis; may be empty

    std::size_t size() const { return t_amb.size(); }

    DisturbanceSample sample(std::size_t k) const {
        const std::size_t i = k % t_amb.size();
        return {t_amb[i], q_gain[i]};
    }

    double solar(std::size_t k) const {
        return solar_wm2.empty() ? 0.0 : solar_wm2[k % solar_wm2.size()];
    }

    // 15-minute slot of day (0..95) and weekend flag for sample k.
    int day_slot(std::size_t k) const;
    bool is_weekend(std::size_t k) const;
};

// Parses a weather CSV with header `timestamp,t_amb_c,solar_wm2`, ISO-8601
// UTC timestamps in strict 900 s increments. t_amb is filled, q_gain zeroed,
// the solar column retained. Malformed rows, gaps, and non-monotone
// timestamps raise ConfigError naming the offending line.
DisturbanceSeries load_weather_csv(const std::string& path);

struct SynthWeatherParams {
    double annual_mean_c = 8.0;
    double annual_amp_k = 10.0;
    double daily_amp_k = 4.0;
    double ar1_phi = 0.95;
    double ar1_sigma_k = 0.5;
    std::int64_t start_unix_s = 1609459200;  // 2021-01-01T00:00:00Z
};

// Double-sinusoid (annual + daily) ambient temperature with AR(1) noise,
// deterministic per seed, plus a simple seasonal solar irradiance curve.
DisturbanceSeries synth_weather(std::uint64_t seed, int days,
                                const SynthWeatherParams& params = {});

// Occupancy/appliance gains as 96-slot W/m^2 day templates plus solar gains
// through an effective aperture window_area * g_value.
struct GainsConfig {
    std::array<double, 96> weekday{};
    std::array<double, 96> weekend{};
    double window_area_m2 = 0.0;
    double g_value = 0.6;
};

// Residential-style default: 3 W/m^2 during 06:00-09:00 and 17:00-23:00,
// 1 W/m^2 otherwise, same shape on weekends.
GainsConfig default_residential_gains(double window_area_m2, double g_value);

// q_gain(k) = a_floor * schedule(k) + window_area * g_value * solar(k).
// Throws ConfigError on negative schedule entries.
std::vector<double> gains_profile(double a_floor, const DisturbanceSeries& series,
                                  const GainsConfig& cfg);

// Convenience: fills series.q_gain with gains_profile(...).
void apply_gains(DisturbanceSeries& series, double a_floor, const GainsConfig& cfg);

// Parses "YYYY-MM-DDTHH:MM:SSZ" to unix seconds. Throws ConfigError.
std::int64_t parse_iso8601_utc(const std::string& ts);

}  // namespace heatctrl
