// heatctrl: building heat-pump control workbench CLI.
//
// Subcommands:
//   simulate  building config + reference controller + weather -> episode log + KPIs
//   train     experiment config -> training artifacts (metrics, checkpoints, summary)
//   evaluate  checkpoint -> KPI report over a full evaluation episode
//   report    run directories -> summary table + plot-ready series CSV
//
// Exit codes: 0 success, 1 validation/config error, 2 runtime divergence.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "heatctrl/building_config.hpp"
#include "heatctrl/controllers.hpp"
#include "heatctrl/errors.hpp"
#include "heatctrl/experiment.hpp"
#include "heatctrl/kpi.hpp"
#include "heatctrl/sim_env.hpp"
#include "heatctrl/trainer.hpp"

namespace {

using namespace heatctrl;

void print_kpis(const KpiReport& k) {
    std::printf("energy_kwh      %.3f\n", k.energy_kwh);
    std::printf("avg_dev_k       %.4f\n", k.avg_dev_k);
    std::printf("max_dev_k       %.3f\n", k.max_dev_k);
    std::printf("violation_steps %ld\n", k.violation_steps);
    std::printf("pass_comfort    %s\n", k.pass_comfort ? "yes" : "no");
}

int cmd_simulate(const std::string& config_path, const std::string& controller,
                 const std::string& weather_csv, int synth_days, std::uint64_t seed,
                 double noise, const std::string& out_dir) {
    const BuildingConfig building = load_building_config(config_path);
    DisturbanceSeries series = weather_csv.empty() ? synth_weather(seed, synth_days)
                                                   : load_weather_csv(weather_csv);
    apply_gains(series, building.params.a_floor, building.gains);

    EnvConfig env_cfg;
    env_cfg.noise_sigma = noise;
    env_cfg.rng_seed = seed;
    SimEnv env(building.params, building.heat_pump, series, env_cfg);

    AgentSpec agent;
    if (controller == "heating_curve") {
        agent.kind = AgentSpec::Kind::heating_curve;
    } else if (controller == "mpc") {
        agent.kind = AgentSpec::Kind::mpc;
    } else {
        throw ConfigError("unknown controller '" + controller +
                          "' (expected heating_curve|mpc)");
    }

    HeatingCurve curve;
    MpcConfig mpc;
    mpc.u_min_c = env_cfg.action_bounds.min_c;
    mpc.u_max_c = env_cfg.action_bounds.max_c;
    mpc.y_min_c = env_cfg.t_ref;

    const auto episode =
        run_controller_episode(env, agent, curve, mpc, CounterRng::derive(seed, 0xe7a1));
    const KpiReport kpis = compute_kpis(episode, env_cfg.t_ref, env_cfg.step_s);

    std::filesystem::create_directories(out_dir);
    log_episode(episode, out_dir + "/episode.csv");
    write_kpis_json(kpis, out_dir + "/kpis.json");
    std::printf("wrote %s/episode.csv (%zu steps)\n", out_dir.c_str(), episode.size());
    print_kpis(kpis);
    return 0;
}

int cmd_train(const std::string& config_path, const std::string& out_dir, bool have_seed,
              std::uint64_t seed, bool have_noise, double noise) {
    ExperimentConfig cfg = load_experiment_config(config_path);
    if (have_seed) cfg.seeds = {seed};
    if (have_noise) cfg.noise_sigmas = {noise};
    const auto runs = run_experiment(cfg, out_dir);
    std::printf("completed %zu runs; summary at %s/summary.csv\n", runs.size(), out_dir.c_str());
    return 0;
}

int cmd_evaluate(const std::string& checkpoint, const std::string& config_path,
                 bool have_noise, double noise, const std::string& out_dir) {
    const std::filesystem::path bin = checkpoint;
    std::filesystem::path sidecar = bin;
    sidecar.replace_extension(".json");
    Trainer trainer = Trainer::load_checkpoint(bin.string(), sidecar.string());

    ExperimentConfig cfg = load_experiment_config(config_path);
    if (have_noise) cfg.noise_sigmas = {noise};
    EnvConfig env_cfg = cfg.env;
    env_cfg.noise_sigma = cfg.noise_sigmas.front();
    const BuildingConfig& building = cfg.buildings.front();
    SimEnv env(building.params, building.heat_pump, build_series(cfg, building), env_cfg);

    std::vector<Transition> episode;
    const KpiReport kpis = trainer.evaluate(env, &episode);
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        log_episode(episode, out_dir + "/episode.csv");
        write_kpis_json(kpis, out_dir + "/kpis.json");
    }
    print_kpis(kpis);
    return 0;
}

int cmd_report(const std::vector<std::string>& run_dirs, const std::string& out_dir) {
    write_report(run_dirs, out_dir);
    std::printf("wrote %s/summary.csv, %s/summary.txt, %s/series.csv\n", out_dir.c_str(),
                out_dir.c_str(), out_dir.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"heatctrl: building heat-pump control workbench"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    double noise = 0.0;

    auto* sim = app.add_subcommand("simulate", "run a reference controller over one episode");
    std::string controller = "heating_curve";
    std::string weather_csv;
    int synth_days = 7;
    sim->add_option("--config", config_path, "building config JSON")->required();
    sim->add_option("--controller", controller, "heating_curve|mpc");
    sim->add_option("--weather-csv", weather_csv, "weather CSV (default: synthetic)");
    sim->add_option("--synth-days", synth_days, "synthetic weather length in days");
    sim->add_option("--seed", seed, "seed for weather/noise");
    sim->add_option("--noise", noise, "observation noise sigma (0 or 0.5)");
    sim->add_option("--out", out_dir, "output directory");

    auto* train = app.add_subcommand("train", "run the experiment scenario matrix");
    train->add_option("--config", config_path, "experiment config JSON")->required();
    train->add_option("--out", out_dir, "output directory");
    auto* train_seed = train->add_option("--seed", seed, "override the config's seed list");
    auto* train_noise = train->add_option("--noise", noise, "override the noise list");

    auto* eval = app.add_subcommand("evaluate", "evaluate a checkpoint over a full episode");
    std::string checkpoint;
    eval->add_option("checkpoint", checkpoint, "checkpoint .bin (with .json sidecar)")
        ->required();
    eval->add_option("--config", config_path, "experiment config JSON")->required();
    auto* eval_noise = eval->add_option("--noise", noise, "override observation noise");
    eval->add_option("--out", out_dir, "output directory (optional)");

    auto* report = app.add_subcommand("report", "summarize finished run directories");
    std::vector<std::string> run_dirs;
    report->add_option("runs", run_dirs, "run directories (each with run.json)")->required();
    report->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
        if (sim->parsed()) {
            return cmd_simulate(config_path, controller, weather_csv, synth_days, seed, noise,
                                out_dir);
        }
        if (train->parsed()) {
            return cmd_train(config_path, out_dir, train_seed->count() > 0, seed,
                             train_noise->count() > 0, noise);
        }
        if (eval->parsed()) {
            return cmd_evaluate(checkpoint, config_path, eval_noise->count() > 0, noise,
                                out_dir);
        }
        if (report->parsed()) {
            return cmd_report(run_dirs, out_dir);
        }
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 1;
    } catch (const SimulationBlowupError& e) {
        std::cerr << "simulation diverged: " << e.what() << "\n";
        return 2;
    } catch (const TrainingDivergenceError& e) {
        std::cerr << "training diverged: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
