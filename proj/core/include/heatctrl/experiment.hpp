#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heatctrl/building_config.hpp"
#include "heatctrl/controllers.hpp"
#include "heatctrl/kpi.hpp"
#include "heatctrl/sim_env.hpp"
#include "heatctrl/trainer.hpp"

namespace heatctrl {

struct WeatherSpec {
    enum class Kind { synth, csv };
    Kind kind = Kind::synth;
    std::uint64_t seed = 1;
    int days = 7;
    std::string path;  // csv only
};

struct AgentSpec {
    enum class Kind { heating_curve, mpc, rl };
    Kind kind = Kind::heating_curve;
    Algorithm algorithm = Algorithm::csac_lb;  // rl only
    double penalty = 0.0;                      // sac_penalty only
    int episodes = 500;                        // rl only
    std::string label;
};

struct ExperimentConfig {
    std::vector<BuildingConfig> buildings;
    std::vector<double> noise_sigmas;
    std::vector<AgentSpec> agents;
    std::vector<std::uint64_t> seeds;
    WeatherSpec weather;
    EnvConfig env;          // noise_sigma overridden per scenario
    TrainerConfig trainer;  // algorithm/penalty/seed overridden per run
    MpcConfig mpc;
    HeatingCurve curve;
    int workers = 0;  // 0: hardware concurrency
};

// Loads and validates an experiment JSON document; relative building paths
// resolve against the config file's directory. Field-level ConfigError.
ExperimentConfig load_experiment_config(const std::string& path);

struct RunResult {
    std::string agent;
    std::string building;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
    std::string dir;
    KpiReport kpis;
};

// Executes the scenario matrix building x noise x agent x seed, one isolated
// directory per run, in parallel worker slots. Writes per-run artifacts, a
// run.json manifest per run, and summary.csv/summary.txt at the top level.
std::vector<RunResult> run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

// Builds the disturbance series (weather plus gains) for one building.
DisturbanceSeries build_series(const ExperimentConfig& cfg, const BuildingConfig& building);

// Controller rollout over one eval-mode episode. kind must not be rl.
std::vector<Transition> run_controller_episode(SimEnv& env, const AgentSpec& agent,
                                               const HeatingCurve& curve, const MpcConfig& mpc,
                                               std::uint64_t seed);

struct SummaryRow {
    std::string agent;
    std::string building;
    double noise_sigma = 0.0;
    int runs = 0;
    double energy_mean = 0.0, energy_std = 0.0;
    double avg_dev_mean = 0.0, avg_dev_std = 0.0;
    double max_dev_mean = 0.0, max_dev_std = 0.0;
};

// Mean/std aggregation across seeds per (agent, building, noise) cell.
std::vector<SummaryRow> summarize(const std::vector<RunResult>& runs);
void write_summary(const std::vector<SummaryRow>& rows, const std::string& out_dir);

// `report`: re-reads run directories (run.json + kpis.json + metrics.csv)
// and writes summary.csv/summary.txt plus a plot-ready series.csv of the
// evaluation trajectories (episode vs energy and deviations per run).
void write_report(const std::vector<std::string>& run_dirs, const std::string& out_dir);

}  // namespace heatctrl
