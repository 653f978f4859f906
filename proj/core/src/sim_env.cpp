#include "heatctrl/sim_env.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "heatctrl/errors.hpp"

namespace heatctrl {

SimEnv::SimEnv(BuildingParams params, HeatPumpModel hp, DisturbanceSeries series, EnvConfig cfg)
    : params_(params), hp_(hp), series_(std::move(series)), cfg_(cfg) {
    if (series_.size() == 0) {
        throw ConfigError("SimEnv: disturbance series is empty");
    }
    if (cfg_.episode_len < 1) {
        throw ConfigError("SimEnv: episode_len must be >= 1");
    }
    if (!(cfg_.action_bounds.min_c < cfg_.action_bounds.max_c)) {
        throw ConfigError("SimEnv: action bounds must satisfy min < max");
    }
    if (cfg_.noise_sigma < 0.0) {
        throw ConfigError("SimEnv: noise_sigma must be >= 0");
    }
    validate(hp_);
}

double SimEnv::supply_from_action(double action) const {
    const double a = std::clamp(action, -1.0, 1.0);
    const double mid = 0.5 * (cfg_.action_bounds.min_c + cfg_.action_bounds.max_c);
    const double half = 0.5 * (cfg_.action_bounds.max_c - cfg_.action_bounds.min_c);
    return mid + a * half;
}

double SimEnv::action_from_supply(double t_sup_c) const {
    const double mid = 0.5 * (cfg_.action_bounds.min_c + cfg_.action_bounds.max_c);
    const double half = 0.5 * (cfg_.action_bounds.max_c - cfg_.action_bounds.min_c);
    return std::clamp((t_sup_c - mid) / half, -1.0, 1.0);
}

Observation SimEnv::observe() {
    const DisturbanceSample d = series_.sample(dist_index());
    Observation obs{d.t_amb, state_.t_room, state_.t_wall, state_.t_hp_ret, d.q_gain / 1000.0};
    if (cfg_.noise_sigma > 0.0) {
        for (double& component : obs) {
            component += rng_.normal(0.0, cfg_.noise_sigma);
        }
    }
    return obs;
}

Observation SimEnv::reset(ResetMode mode, std::uint64_t seed) {
    rng_ = CounterRng(seed);
    if (mode == ResetMode::train) {
        start_index_ = rng_.uniform_int(series_.size());
        state_.t_room = rng_.uniform(15.0, 25.0);
        state_.t_hp_ret = rng_.uniform(20.0, 40.0);
        state_.t_wall = state_.t_room;
        episode_len_ = cfg_.episode_len;
    } else {
        start_index_ = 0;
        state_ = BuildingState{20.0, 20.0, 25.0};
        episode_len_ = static_cast<int>(series_.size());
    }
    step_count_ = 0;
    needs_reset_ = false;
    return observe();
}

Transition SimEnv::step(double action) {
    if (needs_reset_) {
        throw std::logic_error("SimEnv::step called on an environment awaiting reset");
    }
    if (std::isnan(action)) {
        throw std::invalid_argument("SimEnv::step: action is NaN");
    }
    const double a = std::clamp(action, -1.0, 1.0);
    const double t_sup = supply_from_action(a);
    const DisturbanceSample d = series_.sample(dist_index());

    // Electrical power from the start-of-step return temperature, held
    // constant over the control interval.
    const HpPower power = hp_power(hp_, params_, t_sup, state_.t_hp_ret, d.t_amb);
    state_ = integrate_step(state_, d, t_sup, params_, cfg_.step_s, cfg_.substep_s);
    step_count_ += 1;

    Transition tr;
    tr.action = a;
    tr.reward = -power.p_el * cfg_.step_s / 3.6e6;
    tr.cost = std::max(0.0, cfg_.t_ref - state_.t_room);
    tr.done = step_count_ >= episode_len_;
    tr.info.state = state_;
    tr.info.p_el_w = power.p_el;
    tr.info.q_th_w = power.q_th;
    tr.info.cop = power.cop;
    tr.info.t_hp_sup_c = t_sup;
    tr.info.t_amb_c = d.t_amb;
    tr.info.q_gain_w = d.q_gain;
    needs_reset_ = tr.done;
    tr.obs = observe();
    return tr;
}

std::vector<Transition> batch_step(std::vector<SimEnv>& envs, const std::vector<double>& actions) {
    if (envs.size() != actions.size()) {
        throw ConfigError("batch_step: envs and actions length mismatch (" +
                          std::to_string(envs.size()) + " vs " + std::to_string(actions.size()) +
                          ")");
    }
    std::vector<Transition> out(envs.size());
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(hw, envs.size());
    if (workers <= 1 || envs.size() == 1) {
        for (std::size_t i = 0; i < envs.size(); ++i) {
            out[i] = envs[i].step(actions[i]);
        }
        return out;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < envs.size(); i += workers) {
                out[i] = envs[i].step(actions[i]);
            }
        });
    }
    for (auto& th : pool) th.join();
    return out;
}

void log_episode(const std::vector<Transition>& episode, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("log_episode: cannot open for writing: " + path);
    }
    out << "step,t_amb,t_room,t_wall,t_hp_ret,t_hp_sup,p_el_w,cop,reward,cost\n";
    char buf[512];
    for (std::size_t i = 0; i < episode.size(); ++i) {
        const auto& tr = episode[i];
        std::snprintf(buf, sizeof(buf),
                      "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", i,
                      tr.info.t_amb_c, tr.info.state.t_room, tr.info.state.t_wall,
                      tr.info.state.t_hp_ret, tr.info.t_hp_sup_c, tr.info.p_el_w, tr.info.cop,
                      tr.reward, tr.cost);
        out << buf;
    }
    if (!out) {
        throw ConfigError("log_episode: write failed: " + path);
    }
}

std::vector<EpisodeRow> read_episode_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("episode log not found: " + path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw ConfigError("episode log is empty: " + path);
    }
    std::vector<EpisodeRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        EpisodeRow r{};
        const int got = std::sscanf(line.c_str(), "%d,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf",
                                    &r.step, &r.t_amb, &r.t_room, &r.t_wall, &r.t_hp_ret,
                                    &r.t_hp_sup, &r.p_el_w, &r.cop, &r.reward, &r.cost);
        if (got != 10) {
            throw ConfigError("malformed episode row at line " + std::to_string(lineno) +
                              " in " + path);
        }
        rows.push_back(r);
    }
    return rows;
}

}  // namespace heatctrl
