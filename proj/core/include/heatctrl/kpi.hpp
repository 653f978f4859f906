#pragma once

#include <span>
#include <string>

#include "heatctrl/sim_env.hpp"

namespace heatctrl {

struct KpiReport {
    double energy_kwh = 0.0;     // total electrical energy
    double avg_dev_k = 0.0;      // mean |t_room - t_ref| per step
    double max_dev_k = 0.0;      // max |t_room - t_ref|
    long violation_steps = 0;    // steps with t_room < t_ref
    bool pass_comfort = false;   // avg < 0.05 K and max < 2.5 K
};

// Throws ConfigError on an empty trajectory. Deviations use the true
// (noise-free) room temperature.
KpiReport compute_kpis(std::span<const Transition> episode, double t_ref, double step_s = 900.0);
KpiReport compute_kpis_from_log(const std::string& episode_csv_path, double t_ref,
                                double step_s = 900.0);

// Discounted sum of a per-step signal, sum_t gamma^t x[t].
double discounted_sum(std::span<const double> values, double gamma);

void write_kpis_json(const KpiReport& r, const std::string& path);
KpiReport read_kpis_json(const std::string& path);

}  // namespace heatctrl
