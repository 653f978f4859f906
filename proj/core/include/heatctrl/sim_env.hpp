#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "heatctrl/disturbance.hpp"
#include "heatctrl/heat_pump.hpp"
#include "heatctrl/rng.hpp"
#include "heatctrl/thermal_model.hpp"

namespace heatctrl {

// Observation layout: [t_amb, t_room, t_wall, t_hp_ret, q_other_kw].
inline constexpr int kObsDim = 5;
using Observation = std::array<double, kObsDim>;

struct ActionBounds {
    double min_c = 20.0;
    double max_c = 60.0;
};

struct EnvConfig {
    double t_ref = 20.0;        // comfort set-point, degC
    double noise_sigma = 0.0;   // observation noise std (K per component)
    int episode_len = 96;       // training-episode steps
    ActionBounds action_bounds;
    double gamma = 0.99;
    double cost_limit_d = 10.0;
    std::uint64_t rng_seed = 0;
    double step_s = 900.0;
    double substep_s = 60.0;
};

struct StepInfo {
    BuildingState state;  // true (noise-free) post-step state
    double p_el_w = 0.0;
    double q_th_w = 0.0;
    double cop = 0.0;
    double t_hp_sup_c = 0.0;
    double t_amb_c = 0.0;   // disturbance held over the step
    double q_gain_w = 0.0;
};

struct Transition {
    Observation obs{};   // post-step, noisy
    double action = 0.0; // normalized, after clipping to [-1, 1]
    double reward = 0.0; // -p_el * dt, kWh (<= 0)
    double cost = 0.0;   // max(0, t_ref - t_room_true), K
    bool done = false;   // episode truncation
    StepInfo info;
};

enum class ResetMode { train, eval };

// Constrained-MDP wrapper around the thermal model: one scalar action (the
// normalized supply-temperature setpoint), negative electrical energy as
// reward, underheating as cost. Noise touches observations only; reward,
// cost, and logs are computed from the true state. Each instance owns its
// RNG stream, so batches of environments step identically in any order.
class SimEnv {
public:
    SimEnv(BuildingParams params, HeatPumpModel hp, DisturbanceSeries series, EnvConfig cfg);

    // train: uniform start index over the series, t_room ~ U[15,25],
    // t_hp_ret ~ U[20,40], t_wall = t_room, episode_len from config.
    // eval: series start, t_room = t_wall = 20, t_hp_ret = 25, episode
    // spanning the whole series.
    Observation reset(ResetMode mode, std::uint64_t seed);

    // Advances 900 s. Throws std::invalid_argument on NaN actions and
    // std::logic_error when called before reset / after truncation.
    Transition step(double action);

    double supply_from_action(double action) const;
    double action_from_supply(double t_sup_c) const;

    const EnvConfig& config() const { return cfg_; }
    const BuildingParams& params() const { return params_; }
    const HeatPumpModel& heat_pump() const { return hp_; }
    const DisturbanceSeries& series() const { return series_; }
    const BuildingState& state() const { return state_; }
    int step_count() const { return step_count_; }
    int episode_len() const { return episode_len_; }
    std::size_t dist_index() const { return start_index_ + static_cast<std::size_t>(step_count_); }
    bool needs_reset() const { return needs_reset_; }

private:
    Observation observe();

    BuildingParams params_;
    HeatPumpModel hp_;
    DisturbanceSeries series_;
    EnvConfig cfg_;
    BuildingState state_;
    CounterRng rng_;
    std::size_t start_index_ = 0;
    int step_count_ = 0;
    int episode_len_ = 0;
    bool needs_reset_ = true;
};

// Element-wise step over independently seeded environments; bitwise identical
// to stepping each environment sequentially. Throws ConfigError on length
// mismatch.
std::vector<Transition> batch_step(std::vector<SimEnv>& envs, const std::vector<double>& actions);

// CSV episode log with 17-significant-digit floats so parsing the file back
// reproduces the in-memory doubles exactly.
void log_episode(const std::vector<Transition>& episode, const std::string& path);

struct EpisodeRow {
    int step;
    double t_amb, t_room, t_wall, t_hp_ret, t_hp_sup, p_el_w, cop, reward, cost;
};
std::vector<EpisodeRow> read_episode_csv(const std::string& path);

}  // namespace heatctrl
