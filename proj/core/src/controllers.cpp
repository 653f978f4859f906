#include "heatctrl/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "heatctrl/errors.hpp"

namespace heatctrl {

double heating_curve_act(const HeatingCurve& curve, double t_amb_c) {
    if (!std::isfinite(t_amb_c)) {
        throw std::invalid_argument("heating_curve_act: non-finite ambient temperature");
    }
    const double raw = curve.base_c + curve.slope * (20.0 - t_amb_c);
    return std::clamp(raw, curve.clamp_min_c, curve.clamp_max_c);
}

MpcPlanner::MpcPlanner(MpcConfig cfg, BuildingParams params, HeatPumpModel hp)
    : cfg_(cfg), params_(params), hp_(hp) {
    if (cfg_.horizon < 1) {
        throw ConfigError("MpcPlanner: horizon must be >= 1");
    }
    if (!(cfg_.slack_weight > 0.0)) {
        throw ConfigError("MpcPlanner: slack_weight must be positive");
    }
    if (!(cfg_.u_min_c < cfg_.u_max_c)) {
        throw ConfigError("MpcPlanner: control bounds must satisfy u_min < u_max");
    }
}

double MpcPlanner::objective(std::span<const double> u, const BuildingState& from,
                             std::span<const DisturbanceSample> forecast) const {
    BuildingState s = from;
    double total = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const HpPower power = hp_power(hp_, params_, u[k], s.t_hp_ret, forecast[k].t_amb);
        total += power.p_el * 900.0 / 3.6e6;  // kWh, matching the environment's accounting
        s = integrate_step(s, forecast[k], u[k], params_);
        const double slack = std::max(0.0, cfg_.y_min_c - s.t_room);
        total += cfg_.slack_weight * slack * slack;
    }
    return total;
}

std::vector<double> MpcPlanner::warm_start() const {
    const double mid = 0.5 * (cfg_.u_min_c + cfg_.u_max_c);
    if (!have_plan_) {
        return std::vector<double>(static_cast<std::size_t>(cfg_.horizon), mid);
    }
    std::vector<double> shifted(prev_plan_.begin() + 1, prev_plan_.end());
    shifted.push_back(prev_plan_.back());
    return shifted;
}

void MpcPlanner::reset_warm_start() {
    have_plan_ = false;
    prev_plan_.clear();
}

std::vector<double> MpcPlanner::plan(const BuildingState& measured,
                                     std::span<const DisturbanceSample> forecast) {
    const std::size_t horizon = static_cast<std::size_t>(cfg_.horizon);
    if (forecast.size() < horizon) {
        throw ConfigError("MpcPlanner: forecast too short (" + std::to_string(forecast.size()) +
                          " < " + std::to_string(horizon) + ")");
    }
    forecast = forecast.subspan(0, horizon);

    std::vector<double> u = warm_start();
    double j = objective(u, measured, forecast);

    stats_ = MpcSolveStats{};
    stats_.initial_objective = j;

    std::vector<double> grad(horizon, 0.0);
    std::vector<double> trial(horizon, 0.0);
    double step = cfg_.step_size_c;

    for (int it = 0; it < cfg_.iters && step >= cfg_.min_step_c; ++it) {
        stats_.iterations = it + 1;

        // Central differences in each control coordinate.
        double gmax = 0.0;
        for (std::size_t k = 0; k < horizon; ++k) {
            const double saved = u[k];
            u[k] = saved + cfg_.fd_step_c;
            const double jp = objective(u, measured, forecast);
            u[k] = saved - cfg_.fd_step_c;
            const double jm = objective(u, measured, forecast);
            u[k] = saved;
            grad[k] = (jp - jm) / (2.0 * cfg_.fd_step_c);
            gmax = std::max(gmax, std::abs(grad[k]));
        }
        if (gmax == 0.0) {
            break;  // flat (e.g. heating off everywhere): nothing to improve
        }

        for (std::size_t k = 0; k < horizon; ++k) {
            trial[k] = std::clamp(u[k] - step * grad[k] / gmax, cfg_.u_min_c, cfg_.u_max_c);
        }
        const double j_trial = objective(trial, measured, forecast);
        if (j_trial < j) {
            stats_.monotone = stats_.monotone && j_trial <= j;
            u = trial;
            j = j_trial;
            stats_.accepted += 1;
        } else {
            step *= 0.5;
        }
    }

    stats_.final_objective = j;
    prev_plan_ = u;
    have_plan_ = true;
    return u;
}

double MpcPlanner::act(const BuildingState& measured,
                       std::span<const DisturbanceSample> forecast) {
    return plan(measured, forecast).front();
}

}  // namespace heatctrl
