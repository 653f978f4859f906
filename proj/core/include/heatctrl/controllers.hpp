#pragma once

#include <span>
#include <vector>

#include "heatctrl/heat_pump.hpp"
#include "heatctrl/thermal_model.hpp"

namespace heatctrl {

// Rule-based reference controller: supply setpoint linear in the ambient
// deficit below 20 degC, clamped.
struct HeatingCurve {
    double base_c = 28.0;
    double slope = 1.0;
    double clamp_min_c = 20.0;
    double clamp_max_c = 55.0;
};

double heating_curve_act(const HeatingCurve& curve, double t_amb_c);

struct MpcConfig {
    int horizon = 24;           // steps of 900 s (6 h)
    double slack_weight = 0.1;  // on squared comfort slack, per step
    int iters = 200;            // gradient iterations per solve
    double step_size_c = 0.5;   // initial control step, halved on non-decrease
    double u_min_c = 20.0;
    double u_max_c = 60.0;
    double y_min_c = 20.0;      // room-temperature floor
    double fd_step_c = 0.01;    // central-difference probe
    double min_step_c = 1e-4;   // backtracking floor; solve stops below this
};

struct MpcSolveStats {
    double initial_objective = 0.0;
    double final_objective = 0.0;
    int iterations = 0;
    int accepted = 0;
    bool monotone = true;  // accepted iterates never increased the objective
};

// Receding-horizon planner on the ground-truth dynamics. Minimizes predicted
// electrical energy (kWh) plus slack_weight * sum of squared underheating
// slack, by projected gradient descent with infinity-norm-normalized steps
// and backtracking. Stateful: keeps the previous solution; each solve warm
// starts from it shifted by one step with the last entry repeated.
class MpcPlanner {
public:
    MpcPlanner(MpcConfig cfg, BuildingParams params, HeatPumpModel hp);

    // Objective of a control sequence from a given initial state. Exposed for
    // tests and diagnostics.
    double objective(std::span<const double> u, const BuildingState& from,
                     std::span<const DisturbanceSample> forecast) const;

    // Current warm-start sequence (shifted previous plan, or the constant
    // mid-range sequence before the first solve).
    std::vector<double> warm_start() const;

    // Solves for the control sequence. Throws ConfigError when the forecast
    // is shorter than the horizon.
    std::vector<double> plan(const BuildingState& measured,
                             std::span<const DisturbanceSample> forecast);

    // plan() and return the first control, retaining the plan for warm start.
    double act(const BuildingState& measured, std::span<const DisturbanceSample> forecast);

    const MpcSolveStats& last_stats() const { return stats_; }
    const MpcConfig& config() const { return cfg_; }
    void reset_warm_start();

private:
    MpcConfig cfg_;
    BuildingParams params_;
    HeatPumpModel hp_;
    std::vector<double> prev_plan_;
    bool have_plan_ = false;
    MpcSolveStats stats_;
};

}  // namespace heatctrl
