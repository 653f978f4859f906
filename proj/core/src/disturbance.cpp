#include "heatctrl/disturbance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "heatctrl/errors.hpp"
#include "heatctrl/rng.hpp"

namespace heatctrl {

namespace {
constexpr double kTwoPi = 6.283185307179586476925287;
constexpr double kHalfPi = 1.570796326794896619231322;
}  // namespace

int DisturbanceSeries::day_slot(std::size_t k) const {
    const std::int64_t t = start_unix_s + static_cast<std::int64_t>(k * step_s);
    const std::int64_t sec_of_day = ((t % 86400) + 86400) % 86400;
    return static_cast<int>(sec_of_day / 900);
}

bool DisturbanceSeries::is_weekend(std::size_t k) const {
    const std::int64_t t = start_unix_s + static_cast<std::int64_t>(k * step_s);
    const std::int64_t days = t / 86400 - (t % 86400 < 0 ? 1 : 0);
    // 1970-01-01 was a Thursday; dow 0 = Monday.
    const int dow = static_cast<int>(((days + 3) % 7 + 7) % 7);
    return dow >= 5;
}

std::int64_t parse_iso8601_utc(const std::string& ts) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    char zone = '\0';
    if (std::sscanf(ts.c_str(), "%d-%d-%dT%d:%d:%d%c", &y, &mo, &d, &h, &mi, &s, &zone) < 6 ||
        (zone != 'Z' && zone != '\0')) {
        throw ConfigError("bad timestamp '" + ts + "' (expected YYYY-MM-DDTHH:MM:SSZ)");
    }
    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                             day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 60) {
        throw ConfigError("bad timestamp '" + ts + "' (invalid calendar date or time)");
    }
    const sys_days sd{ymd};
    return duration_cast<seconds>(sd.time_since_epoch()).count() + h * 3600 + mi * 60 + s;
}

DisturbanceSeries load_weather_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("weather file not found: " + path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw ConfigError("weather file is empty: " + path);
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "timestamp,t_amb_c,solar_wm2") {
        throw ConfigError("bad weather header in " + path +
                          " (expected 'timestamp,t_amb_c,solar_wm2', got '" + line + "')");
    }

    DisturbanceSeries series;
    series.step_s = 900.0;
    std::int64_t prev_ts = 0;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string ts_field, amb_field, solar_field;
        if (!std::getline(row, ts_field, ',') || !std::getline(row, amb_field, ',') ||
            !std::getline(row, solar_field)) {
            throw ConfigError("malformed weather row at line " + std::to_string(lineno) +
                              " in " + path);
        }
        std::int64_t ts;
        double amb, solar;
        try {
            ts = parse_iso8601_utc(ts_field);
            amb = std::stod(amb_field);
            solar = std::stod(solar_field);
        } catch (const ConfigError&) {
            throw ConfigError("malformed weather row at line " + std::to_string(lineno) +
                              " in " + path);
        } catch (const std::exception&) {
            throw ConfigError("malformed weather row at line " + std::to_string(lineno) +
                              " in " + path);
        }
        if (!std::isfinite(amb) || !std::isfinite(solar)) {
            throw ConfigError("non-finite weather value at line " + std::to_string(lineno) +
                              " in " + path);
        }
        if (series.t_amb.empty()) {
            series.start_unix_s = ts;
        } else {
            const std::int64_t delta = ts - prev_ts;
            if (delta <= 0) {
                throw ConfigError("non-monotone timestamp at line " + std::to_string(lineno) +
                                  " in " + path);
            }
            if (delta != 900) {
                throw ConfigError("timestamp gap of " + std::to_string(delta) +
                                  " s at line " + std::to_string(lineno) + " in " + path +
                                  " (rows must advance by 900 s)");
            }
        }
        prev_ts = ts;
        series.t_amb.push_back(amb);
        series.solar_wm2.push_back(solar);
    }
    if (series.t_amb.empty()) {
        throw ConfigError("weather file has no data rows: " + path);
    }
    series.q_gain.assign(series.t_amb.size(), 0.0);
    return series;
}

DisturbanceSeries synth_weather(std::uint64_t seed, int days, const SynthWeatherParams& p) {
    if (days < 1) {
        throw ConfigError("synth_weather: days must be >= 1");
    }
    const std::size_t n = static_cast<std::size_t>(days) * 96;
    DisturbanceSeries series;
    series.start_unix_s = p.start_unix_s;
    series.step_s = 900.0;
    series.t_amb.resize(n);
    series.solar_wm2.resize(n);
    series.q_gain.assign(n, 0.0);

    CounterRng rng(seed);
    double ar = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * 900.0;
        const double day = t / 86400.0;
        const double hour = std::fmod(t / 3600.0, 24.0);
        const double annual = p.annual_amp_k * std::sin(kTwoPi * day / 365.0 - kHalfPi);
        const double daily = p.daily_amp_k * std::sin(kTwoPi * hour / 24.0 - kHalfPi);
        ar = p.ar1_phi * ar + rng.normal(0.0, p.ar1_sigma_k);
        series.t_amb[k] = p.annual_mean_c + annual + daily + ar;
        // Clear-sky-style irradiance: zero at night, seasonal noon amplitude.
        const double noon_amp = 250.0 * (1.0 + std::sin(kTwoPi * day / 365.0 - kHalfPi));
        const double sun = std::sin(kTwoPi * (hour - 6.0) / 24.0);
        series.solar_wm2[k] = std::max(0.0, noon_amp * sun);
    }
    return series;
}

GainsConfig default_residential_gains(double window_area_m2, double g_value) {
    GainsConfig cfg;
    cfg.window_area_m2 = window_area_m2;
    cfg.g_value = g_value;
    for (int slot = 0; slot < 96; ++slot) {
        const bool morning = slot >= 24 && slot < 36;   // 06:00-09:00
        const bool evening = slot >= 68 && slot < 92;   // 17:00-23:00
        const double w = (morning || evening) ? 3.0 : 1.0;
        cfg.weekday[slot] = w;
        cfg.weekend[slot] = w;
    }
    return cfg;
}

std::vector<double> gains_profile(double a_floor, const DisturbanceSeries& series,
                                  const GainsConfig& cfg) {
    for (int slot = 0; slot < 96; ++slot) {
        if (cfg.weekday[slot] < 0.0 || cfg.weekend[slot] < 0.0) {
            throw ConfigError("gains schedule entries must be non-negative (slot " +
                              std::to_string(slot) + ")");
        }
    }
    std::vector<double> gains(series.size());
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& sched = series.is_weekend(k) ? cfg.weekend : cfg.weekday;
        const double occ = a_floor * sched[series.day_slot(k)];
        const double sol = cfg.window_area_m2 * cfg.g_value * series.solar(k);
        gains[k] = std::max(0.0, occ + sol);
    }
    return gains;
}

void apply_gains(DisturbanceSeries& series, double a_floor, const GainsConfig& cfg) {
    series.q_gain = gains_profile(a_floor, series, cfg);
}

}  // namespace heatctrl
