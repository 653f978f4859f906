#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "heatctrl/disturbance.hpp"
#include "heatctrl/errors.hpp"

using namespace heatctrl;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path.string();
}

}  // namespace

TEST_SUITE_BEGIN("disturbance");

TEST_CASE("iso8601 parsing") {
    CHECK(parse_iso8601_utc("1970-01-01T00:00:00Z") == 0);
    CHECK(parse_iso8601_utc("2021-01-01T00:00:00Z") == 1609459200);
    CHECK(parse_iso8601_utc("2021-01-01T00:15:00Z") == 1609459200 + 900);
    CHECK_THROWS_AS(parse_iso8601_utc("2021-13-01T00:00:00Z"), ConfigError);
    CHECK_THROWS_AS(parse_iso8601_utc("not a timestamp"), ConfigError);
}

TEST_CASE("load_weather_csv accepts a valid file") {
    const auto path = write_temp("hc_weather_ok.csv",
                                 "timestamp,t_amb_c,solar_wm2\n"
                                 "2021-01-01T00:00:00Z,-2.5,0\n"
                                 "2021-01-01T00:15:00Z,-2.25,0\n");
    const DisturbanceSeries s = load_weather_csv(path);
    REQUIRE(s.size() == 2);
    CHECK(s.t_amb[0] == -2.5);
    CHECK(s.q_gain[0] == 0.0);
    CHECK(s.start_unix_s == 1609459200);
    // Wrap-around indexing.
    CHECK(s.sample(2).t_amb == s.sample(0).t_amb);
}

TEST_CASE("load_weather_csv rejects bad inputs") {
    CHECK_THROWS_AS(load_weather_csv("/nonexistent/weather.csv"), ConfigError);

    const auto bad_header = write_temp("hc_weather_hdr.csv", "time,t,solar\n");
    CHECK_THROWS_AS(load_weather_csv(bad_header), ConfigError);

    const auto gap = write_temp("hc_weather_gap.csv",
                                "timestamp,t_amb_c,solar_wm2\n"
                                "2021-01-01T00:00:00Z,0,0\n"
                                "2021-01-01T00:30:00Z,1,0\n");
    try {
        load_weather_csv(gap);
        FAIL("expected gap error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        CHECK(std::string(e.what()).find("1800") != std::string::npos);
    }

    const auto backwards = write_temp("hc_weather_mono.csv",
                                      "timestamp,t_amb_c,solar_wm2\n"
                                      "2021-01-01T00:15:00Z,0,0\n"
                                      "2021-01-01T00:00:00Z,1,0\n");
    CHECK_THROWS_AS(load_weather_csv(backwards), ConfigError);

    const auto malformed = write_temp("hc_weather_bad.csv",
                                      "timestamp,t_amb_c,solar_wm2\n"
                                      "2021-01-01T00:00:00Z,zero,0\n");
    CHECK_THROWS_AS(load_weather_csv(malformed), ConfigError);
}

TEST_CASE("annual file wraps around at 35040 samples") {
    SynthWeatherParams p;
    const DisturbanceSeries s = synth_weather(5, 365, p);
    REQUIRE(s.size() == 35040u);  // 365 * 96
    CHECK(s.sample(35040).t_amb == s.sample(0).t_amb);
    CHECK(s.sample(35041).t_amb == s.sample(1).t_amb);
}

TEST_CASE("synth_weather determinism and noise-free closed form") {
    const DisturbanceSeries a = synth_weather(9, 3);
    const DisturbanceSeries b = synth_weather(9, 3);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a.t_amb[k] == b.t_amb[k]);
    }

    SynthWeatherParams quiet;
    quiet.ar1_sigma_k = 0.0;
    const DisturbanceSeries c = synth_weather(1, 2, quiet);
    for (std::size_t k = 0; k < c.size(); ++k) {
        const double t = static_cast<double>(k) * 900.0;
        const double day = t / 86400.0;
        const double hour = std::fmod(t / 3600.0, 24.0);
        const double expect =
            8.0 + 10.0 * std::sin(2.0 * M_PI * day / 365.0 - M_PI / 2.0) +
            4.0 * std::sin(2.0 * M_PI * hour / 24.0 - M_PI / 2.0);
        CHECK(c.t_amb[k] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("annual synthetic series stays in a plausible band") {
    const DisturbanceSeries s = synth_weather(1, 365);
    double lo = 1e9, hi = -1e9;
    for (double t : s.t_amb) {
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    CHECK(lo >= -10.0);
    CHECK(hi <= 26.0);
}

TEST_CASE("gains profile: occupancy and solar terms") {
    DisturbanceSeries s = synth_weather(1, 2);
    GainsConfig zero{};
    zero.window_area_m2 = 0.0;
    auto gains = gains_profile(200.0, s, zero);
    for (double g : gains) CHECK(g == 0.0);

    GainsConfig flat{};
    flat.weekday.fill(3.0);
    flat.weekend.fill(3.0);
    flat.window_area_m2 = 0.0;
    gains = gains_profile(200.0, s, flat);
    for (double g : gains) CHECK(g == 600.0);

    // Pure solar: 500 W/m2 through 20 m2 at g = 0.6 -> 6000 W.
    DisturbanceSeries sol = s;
    sol.solar_wm2.assign(sol.size(), 500.0);
    GainsConfig solar_only{};
    solar_only.window_area_m2 = 20.0;
    solar_only.g_value = 0.6;
    gains = gains_profile(200.0, sol, solar_only);
    for (double g : gains) CHECK(g == doctest::Approx(6000.0).epsilon(1e-12));
}

TEST_CASE("negative schedule entries are rejected") {
    DisturbanceSeries s = synth_weather(1, 1);
    GainsConfig bad{};
    bad.weekday[10] = -1.0;
    CHECK_THROWS_AS(gains_profile(100.0, s, bad), ConfigError);
}

TEST_CASE("default residential schedule shape") {
    const GainsConfig cfg = default_residential_gains(20.0, 0.6);
    CHECK(cfg.weekday[0] == 1.0);    // 00:00
    CHECK(cfg.weekday[24] == 3.0);   // 06:00
    CHECK(cfg.weekday[35] == 3.0);   // 08:45
    CHECK(cfg.weekday[36] == 1.0);   // 09:00
    CHECK(cfg.weekday[68] == 3.0);   // 17:00
    CHECK(cfg.weekday[91] == 3.0);   // 22:45
    CHECK(cfg.weekday[92] == 1.0);   // 23:00
}

TEST_CASE("weekday/weekend schedules select by calendar day") {
    // 2021-01-01 is a Friday; day 2 (Jan 2) is a Saturday.
    DisturbanceSeries s = synth_weather(1, 3);
    GainsConfig cfg{};
    cfg.weekday.fill(1.0);
    cfg.weekend.fill(2.0);
    const auto gains = gains_profile(1.0, s, cfg);
    CHECK(gains[0] == 1.0);        // Friday
    CHECK(gains[96] == 2.0);       // Saturday
    CHECK(gains[2 * 96] == 2.0);   // Sunday
    CHECK(s.is_weekend(0) == false);
    CHECK(s.is_weekend(96) == true);
}

TEST_SUITE_END();
