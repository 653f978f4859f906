#include "heatctrl/kpi.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "heatctrl/errors.hpp"

namespace heatctrl {

namespace {

KpiReport finish_report(double energy_ws, double dev_sum, double dev_max, long violations,
                        std::size_t n) {
    KpiReport r;
    r.energy_kwh = energy_ws / 3.6e6;
    r.avg_dev_k = dev_sum / static_cast<double>(n);
    r.max_dev_k = dev_max;
    r.violation_steps = violations;
    r.pass_comfort = r.avg_dev_k < 0.05 && r.max_dev_k < 2.5;
    return r;
}

}  // namespace

KpiReport compute_kpis(std::span<const Transition> episode, double t_ref, double step_s) {
    if (episode.empty()) {
        throw ConfigError("compute_kpis: empty trajectory");
    }
    double energy_ws = 0.0;
    double dev_sum = 0.0;
    double dev_max = 0.0;
    long violations = 0;
    for (const Transition& tr : episode) {
        energy_ws += tr.info.p_el_w * step_s;
        const double dev = std::abs(tr.info.state.t_room - t_ref);
        dev_sum += dev;
        dev_max = std::max(dev_max, dev);
        if (tr.info.state.t_room < t_ref) ++violations;
    }
    return finish_report(energy_ws, dev_sum, dev_max, violations, episode.size());
}

KpiReport compute_kpis_from_log(const std::string& episode_csv_path, double t_ref,
                                double step_s) {
    const auto rows = read_episode_csv(episode_csv_path);
    if (rows.empty()) {
        throw ConfigError("compute_kpis: empty trajectory in " + episode_csv_path);
    }
    double energy_ws = 0.0;
    double dev_sum = 0.0;
    double dev_max = 0.0;
    long violations = 0;
    for (const EpisodeRow& r : rows) {
        energy_ws += r.p_el_w * step_s;
        const double dev = std::abs(r.t_room - t_ref);
        dev_sum += dev;
        dev_max = std::max(dev_max, dev);
        if (r.t_room < t_ref) ++violations;
    }
    return finish_report(energy_ws, dev_sum, dev_max, violations, rows.size());
}

double discounted_sum(std::span<const double> values, double gamma) {
    double acc = 0.0;
    double g = 1.0;
    for (double v : values) {
        acc += g * v;
        g *= gamma;
    }
    return acc;
}

void write_kpis_json(const KpiReport& r, const std::string& path) {
    nlohmann::json j{{"energy_kwh", r.energy_kwh},
                     {"avg_dev_k", r.avg_dev_k},
                     {"max_dev_k", r.max_dev_k},
                     {"violation_steps", r.violation_steps},
                     {"pass_comfort", r.pass_comfort}};
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write KPI report: " + path);
    }
    out << j.dump(2) << "\n";
}

KpiReport read_kpis_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("KPI report not found: " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path + ": JSON parse error: " + e.what());
    }
    KpiReport r;
    r.energy_kwh = j.at("energy_kwh").get<double>();
    r.avg_dev_k = j.at("avg_dev_k").get<double>();
    r.max_dev_k = j.at("max_dev_k").get<double>();
    r.violation_steps = j.at("violation_steps").get<long>();
    r.pass_comfort = j.at("pass_comfort").get<bool>();
    return r;
}

}  // namespace heatctrl
