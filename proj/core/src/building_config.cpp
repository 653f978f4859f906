#include "heatctrl/building_config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "heatctrl/errors.hpp"

namespace heatctrl {

namespace {

using nlohmann::json;

double get_number(const json& j, const std::string& key, const std::string& origin) {
    if (!j.contains(key)) {
        throw ConfigError(origin + ": missing field '" + key + "'");
    }
    if (!j.at(key).is_number()) {
        throw ConfigError(origin + ": field '" + key + "' must be a number");
    }
    return j.at(key).get<double>();
}

double get_number_or(const json& j, const std::string& key, double fallback,
                     const std::string& origin) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) {
        throw ConfigError(origin + ": field '" + key + "' must be a number");
    }
    return j.at(key).get<double>();
}

std::array<double, 96> get_schedule(const json& j, const std::string& key,
                                    const std::array<double, 96>& fallback,
                                    const std::string& origin) {
    if (!j.contains(key)) return fallback;
    const auto& arr = j.at(key);
    if (!arr.is_array() || arr.size() != 96) {
        throw ConfigError(origin + ": field '" + key + "' must be an array of 96 W/m^2 values");
    }
    std::array<double, 96> out{};
    for (std::size_t i = 0; i < 96; ++i) {
        if (!arr[i].is_number()) {
            throw ConfigError(origin + ": field '" + key + "' entry " + std::to_string(i) +
                              " must be a number");
        }
        out[i] = arr[i].get<double>();
    }
    return out;
}

}  // namespace

BuildingConfig parse_building_config(const std::string& json_text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": JSON parse error: " + e.what());
    }

    BuildingConfig cfg;
    cfg.name = doc.value("name", std::string("building"));

    RawBuildingParams raw;
    raw.h_ve_tr = get_number(doc, "h_ve_tr", origin);
    raw.c_bldg_specific = get_number(doc, "c_bldg_specific", origin);
    raw.a_floor = get_number(doc, "a_floor", origin);
    raw.h_room = get_number(doc, "h_room", origin);
    raw.water_volume = get_number(doc, "water_volume", origin);
    raw.h_rad_con = get_number(doc, "h_rad_con", origin);
    raw.mdot_hp = get_number(doc, "mdot_hp", origin);
    raw.cp_water = get_number_or(doc, "cp_water", 4186.0, origin);
    raw.wall_split = get_number_or(doc, "wall_split", 0.5, origin);
    raw.h_wall = get_number_or(doc, "h_wall", 3.0 * raw.h_ve_tr, origin);
    raw.gain_zone_fraction = get_number_or(doc, "gain_zone_fraction", 1.0, origin);
    if (doc.contains("variant")) {
        if (!doc.at("variant").is_string()) {
            throw ConfigError(origin + ": field 'variant' must be a string");
        }
        raw.variant = model_variant_from_string(doc.at("variant").get<std::string>());
    }
    cfg.params = derive_params(raw);

    if (doc.contains("heat_pump")) {
        const auto& hp = doc.at("heat_pump");
        if (!hp.is_object()) {
            throw ConfigError(origin + ": field 'heat_pump' must be an object");
        }
        cfg.heat_pump.eta_wp = get_number_or(hp, "eta_wp", 0.45, origin);
        cfg.heat_pump.cop_min = get_number_or(hp, "cop_min", 1.0, origin);
        cfg.heat_pump.cop_max = get_number_or(hp, "cop_max", 8.0, origin);
        if (hp.contains("source")) {
            const std::string src = hp.at("source").get<std::string>();
            if (src == "air") {
                cfg.heat_pump.source = HeatSource::air;
            } else if (src == "ground") {
                cfg.heat_pump.source = HeatSource::ground;
            } else {
                throw ConfigError(origin + ": heat_pump.source must be 'air' or 'ground'");
            }
        }
        cfg.heat_pump.source_temp_c = get_number_or(hp, "source_temp_c", 10.0, origin);
        if (hp.contains("poly")) {
            const auto& poly = hp.at("poly");
            if (!poly.is_array() || poly.size() != 6) {
                throw ConfigError(origin + ": heat_pump.poly must be an array of 6 coefficients");
            }
            std::array<double, 6> c{};
            for (std::size_t i = 0; i < 6; ++i) c[i] = poly[i].get<double>();
            cfg.heat_pump.poly = c;
        }
    }
    validate(cfg.heat_pump);

    double window_area = 0.0, g_value = 0.6;
    if (doc.contains("gains")) {
        const auto& g = doc.at("gains");
        if (!g.is_object()) {
            throw ConfigError(origin + ": field 'gains' must be an object");
        }
        window_area = get_number_or(g, "window_area", 0.0, origin);
        g_value = get_number_or(g, "g_value", 0.6, origin);
        cfg.gains = default_residential_gains(window_area, g_value);
        cfg.gains.weekday = get_schedule(g, "weekday", cfg.gains.weekday, origin);
        cfg.gains.weekend = get_schedule(g, "weekend", cfg.gains.weekend, origin);
    } else {
        cfg.gains = default_residential_gains(window_area, g_value);
    }
    return cfg;
}

BuildingConfig load_building_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("building config not found: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_building_config(buf.str(), path);
}

}  // namespace heatctrl
