#include "heatctrl/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "heatctrl/errors.hpp"

namespace heatctrl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string noise_tag(double sigma) {
    std::ostringstream os;
    os << sigma;
    return os.str();
}

std::string agent_label(const AgentSpec& agent) {
    if (!agent.label.empty()) return agent.label;
    switch (agent.kind) {
        case AgentSpec::Kind::heating_curve: return "heating_curve";
        case AgentSpec::Kind::mpc: return "mpc";
        case AgentSpec::Kind::rl:
            if (agent.algorithm == Algorithm::sac_penalty) {
                std::ostringstream os;
                os << "sac_penalty" << agent.penalty;
                return os.str();
            }
            return to_string(agent.algorithm);
    }
    return "agent";
}

AgentSpec parse_agent(const json& j, const std::string& origin) {
    if (!j.is_object() || !j.contains("type")) {
        throw ConfigError(origin + ": each agent needs a 'type' field");
    }
    AgentSpec agent;
    const std::string type = j.at("type").get<std::string>();
    if (type == "heating_curve") {
        agent.kind = AgentSpec::Kind::heating_curve;
    } else if (type == "mpc") {
        agent.kind = AgentSpec::Kind::mpc;
    } else if (type == "rl") {
        agent.kind = AgentSpec::Kind::rl;
        if (!j.contains("algorithm")) {
            throw ConfigError(origin + ": rl agent needs an 'algorithm' field");
        }
        agent.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
        agent.penalty = j.value("penalty", 0.0);
        agent.episodes = j.value("episodes", 500);
        if (agent.episodes < 1) {
            throw ConfigError(origin + ": rl agent 'episodes' must be >= 1");
        }
    } else {
        throw ConfigError(origin + ": unknown agent type '" + type +
                          "' (expected heating_curve|mpc|rl)");
    }
    agent.label = j.value("label", std::string());
    if (agent.label.empty()) agent.label = agent_label(agent);
    return agent;
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("experiment config not found: " + path);
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": JSON parse error: " + e.what());
    }

    ExperimentConfig cfg;
    const fs::path base = fs::path(path).parent_path();

    if (!doc.contains("buildings") || !doc.at("buildings").is_array() ||
        doc.at("buildings").empty()) {
        throw ConfigError(path + ": 'buildings' must be a non-empty array of config paths");
    }
    for (const auto& b : doc.at("buildings")) {
        if (!b.is_string()) {
            throw ConfigError(path + ": 'buildings' entries must be file paths");
        }
        fs::path bp = b.get<std::string>();
        if (bp.is_relative()) bp = base / bp;
        cfg.buildings.push_back(load_building_config(bp.string()));
    }

    cfg.noise_sigmas = doc.value("noise_sigmas", std::vector<double>{0.0});
    if (cfg.noise_sigmas.empty()) {
        throw ConfigError(path + ": 'noise_sigmas' must not be empty");
    }
    for (double s : cfg.noise_sigmas) {
        if (s < 0.0) throw ConfigError(path + ": noise sigma must be >= 0");
    }

    if (!doc.contains("agents") || !doc.at("agents").is_array() || doc.at("agents").empty()) {
        throw ConfigError(path + ": 'agents' must be a non-empty array");
    }
    for (const auto& a : doc.at("agents")) {
        cfg.agents.push_back(parse_agent(a, path));
    }

    cfg.seeds = doc.value("seeds", std::vector<std::uint64_t>{1});
    if (cfg.seeds.empty()) {
        throw ConfigError(path + ": 'seeds' must not be empty");
    }

    if (doc.contains("weather")) {
        const auto& w = doc.at("weather");
        const std::string type = w.value("type", std::string("synth"));
        if (type == "synth") {
            cfg.weather.kind = WeatherSpec::Kind::synth;
            cfg.weather.seed = w.value("seed", std::uint64_t{1});
            cfg.weather.days = w.value("days", 7);
            if (cfg.weather.days < 1) {
                throw ConfigError(path + ": weather.days must be >= 1");
            }
        } else if (type == "csv") {
            cfg.weather.kind = WeatherSpec::Kind::csv;
            if (!w.contains("path")) {
                throw ConfigError(path + ": weather.type csv requires weather.path");
            }
            fs::path wp = w.at("path").get<std::string>();
            if (wp.is_relative()) wp = base / wp;
            cfg.weather.path = wp.string();
        } else {
            throw ConfigError(path + ": weather.type must be 'synth' or 'csv'");
        }
    }

    if (doc.contains("env")) {
        const auto& e = doc.at("env");
        cfg.env.t_ref = e.value("t_ref", cfg.env.t_ref);
        cfg.env.episode_len = e.value("episode_len", cfg.env.episode_len);
        cfg.env.action_bounds.min_c = e.value("action_min", cfg.env.action_bounds.min_c);
        cfg.env.action_bounds.max_c = e.value("action_max", cfg.env.action_bounds.max_c);
        cfg.env.gamma = e.value("gamma", cfg.env.gamma);
        cfg.env.cost_limit_d = e.value("cost_limit", cfg.env.cost_limit_d);
        cfg.env.substep_s = e.value("substep_s", cfg.env.substep_s);
    }

    if (doc.contains("trainer")) {
        const auto& t = doc.at("trainer");
        cfg.trainer.batch_size = t.value("batch_size", cfg.trainer.batch_size);
        cfg.trainer.hidden = t.value("hidden", cfg.trainer.hidden);
        cfg.trainer.gamma = cfg.env.gamma;
        cfg.trainer.lr = t.value("lr", cfg.trainer.lr);
        cfg.trainer.tau = t.value("tau", cfg.trainer.tau);
        cfg.trainer.warmup_steps = t.value("random_steps", cfg.trainer.warmup_steps);
        cfg.trainer.update_every = t.value("update_every", cfg.trainer.update_every);
        cfg.trainer.buffer_capacity = t.value("buffer_size", cfg.trainer.buffer_capacity);
        cfg.trainer.barrier_mu = t.value("log_barrier_factor", cfg.trainer.barrier_mu);
        cfg.trainer.auto_alpha = t.value("auto_alpha", cfg.trainer.auto_alpha);
        cfg.trainer.alpha_init = t.value("alpha_init", cfg.trainer.alpha_init);
        cfg.trainer.eval_every_episodes = t.value("eval_every", cfg.trainer.eval_every_episodes);
    }
    cfg.trainer.gamma = cfg.env.gamma;
    cfg.trainer.cost_limit_d = cfg.env.cost_limit_d;

    if (doc.contains("mpc")) {
        const auto& m = doc.at("mpc");
        cfg.mpc.horizon = m.value("horizon", cfg.mpc.horizon);
        cfg.mpc.slack_weight = m.value("slack_weight", cfg.mpc.slack_weight);
        cfg.mpc.iters = m.value("iters", cfg.mpc.iters);
        cfg.mpc.step_size_c = m.value("step_size", cfg.mpc.step_size_c);
    }
    cfg.mpc.u_min_c = cfg.env.action_bounds.min_c;
    cfg.mpc.u_max_c = cfg.env.action_bounds.max_c;
    cfg.mpc.y_min_c = cfg.env.t_ref;

    if (doc.contains("heating_curve")) {
        const auto& h = doc.at("heating_curve");
        cfg.curve.base_c = h.value("base", cfg.curve.base_c);
        cfg.curve.slope = h.value("slope", cfg.curve.slope);
        cfg.curve.clamp_min_c = h.value("clamp_min", cfg.curve.clamp_min_c);
        cfg.curve.clamp_max_c = h.value("clamp_max", cfg.curve.clamp_max_c);
    }

    cfg.workers = doc.value("workers", 0);
    return cfg;
}

DisturbanceSeries build_series(const ExperimentConfig& cfg, const BuildingConfig& building) {
    DisturbanceSeries series = cfg.weather.kind == WeatherSpec::Kind::synth
                                   ? synth_weather(cfg.weather.seed, cfg.weather.days)
                                   : load_weather_csv(cfg.weather.path);
    apply_gains(series, building.params.a_floor, building.gains);
    return series;
}

std::vector<Transition> run_controller_episode(SimEnv& env, const AgentSpec& agent,
                                               const HeatingCurve& curve, const MpcConfig& mpc,
                                               std::uint64_t seed) {
    MpcPlanner planner(mpc, env.params(), env.heat_pump());
    std::vector<DisturbanceSample> forecast(static_cast<std::size_t>(mpc.horizon));

    Observation obs = env.reset(ResetMode::eval, seed);
    std::vector<Transition> episode;
    episode.reserve(static_cast<std::size_t>(env.episode_len()));
    while (true) {
        double t_sup;
        if (agent.kind == AgentSpec::Kind::heating_curve) {
            t_sup = heating_curve_act(curve, obs[0]);
        } else if (agent.kind == AgentSpec::Kind::mpc) {
            // Perfect forecast: the ground-truth disturbance slice.
            for (int k = 0; k < mpc.horizon; ++k) {
                forecast[static_cast<std::size_t>(k)] =
                    env.series().sample(env.dist_index() + static_cast<std::size_t>(k));
            }
            const BuildingState measured{obs[1], obs[2], obs[3]};
            t_sup = planner.act(measured, forecast);
            const MpcSolveStats& stats = planner.last_stats();
            if (!stats.monotone || stats.final_objective > stats.initial_objective) {
                throw std::logic_error("MPC solve violated objective monotonicity");
            }
        } else {
            throw ConfigError("run_controller_episode: agent must be heating_curve or mpc");
        }
        Transition tr = env.step(env.action_from_supply(t_sup));
        obs = tr.obs;
        episode.push_back(std::move(tr));
        if (episode.back().done) break;
    }
    return episode;
}

namespace {

void write_run_manifest(const RunResult& run, const std::string& dir) {
    json j{{"agent", run.agent},
           {"building", run.building},
           {"noise_sigma", run.noise_sigma},
           {"seed", run.seed}};
    std::ofstream out(dir + "/run.json");
    out << j.dump(2) << "\n";
}

struct RunTask {
    const BuildingConfig* building;
    double noise_sigma;
    const AgentSpec* agent;
    std::uint64_t seed;
};

}  // namespace

std::vector<RunResult> run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    fs::create_directories(out_dir + "/runs");

    // Disturbance series per building, shared read-only across runs.
    std::vector<DisturbanceSeries> series;
    series.reserve(cfg.buildings.size());
    for (const auto& b : cfg.buildings) {
        series.push_back(build_series(cfg, b));
    }

    std::vector<RunTask> tasks;
    for (std::size_t bi = 0; bi < cfg.buildings.size(); ++bi) {
        for (double noise : cfg.noise_sigmas) {
            for (const auto& agent : cfg.agents) {
                for (std::uint64_t seed : cfg.seeds) {
                    tasks.push_back(RunTask{&cfg.buildings[bi], noise, &agent, seed});
                }
            }
        }
    }

    std::vector<RunResult> results(tasks.size());
    std::vector<std::string> errors(tasks.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) break;
            const RunTask& task = tasks[i];
            RunResult run;
            run.agent = task.agent->label;
            run.building = task.building->name;
            run.noise_sigma = task.noise_sigma;
            run.seed = task.seed;
            std::ostringstream dir;
            dir << out_dir << "/runs/" << run.building << "_noise" << noise_tag(run.noise_sigma)
                << "_" << run.agent << "_seed" << run.seed;
            run.dir = dir.str();
            fs::create_directories(run.dir);
            try {
                const std::size_t bi =
                    static_cast<std::size_t>(task.building - cfg.buildings.data());
                EnvConfig env_cfg = cfg.env;
                env_cfg.noise_sigma = task.noise_sigma;
                env_cfg.rng_seed = task.seed;
                SimEnv env(task.building->params, task.building->heat_pump, series[bi], env_cfg);

                if (task.agent->kind == AgentSpec::Kind::rl) {
                    TrainerConfig tc = cfg.trainer;
                    tc.algorithm = task.agent->algorithm;
                    tc.penalty = task.agent->penalty;
                    tc.seed = task.seed;
                    Trainer trainer(tc);
                    TrainResult tr = trainer.train(env, task.agent->episodes, run.dir);
                    run.kpis = tr.final_kpis;
                } else {
                    const std::uint64_t eval_seed = CounterRng::derive(task.seed, 0xe7a1);
                    const auto episode =
                        run_controller_episode(env, *task.agent, cfg.curve, cfg.mpc, eval_seed);
                    run.kpis = compute_kpis(episode, env_cfg.t_ref, env_cfg.step_s);
                    log_episode(episode, run.dir + "/episode.csv");
                    write_kpis_json(run.kpis, run.dir + "/kpis.json");
                }
                write_run_manifest(run, run.dir);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
            results[i] = run;
        }
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t n_workers =
        std::min<std::size_t>(cfg.workers > 0 ? static_cast<std::size_t>(cfg.workers) : hw,
                              tasks.size());
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (!errors[i].empty()) {
            throw TrainingDivergenceError("run " + results[i].dir + " failed: " + errors[i]);
        }
    }

    write_summary(summarize(results), out_dir);
    return results;
}

std::vector<SummaryRow> summarize(const std::vector<RunResult>& runs) {
    std::vector<SummaryRow> rows;
    auto find_row = [&](const RunResult& r) -> SummaryRow& {
        for (auto& row : rows) {
            if (row.agent == r.agent && row.building == r.building &&
                row.noise_sigma == r.noise_sigma) {
                return row;
            }
        }
        rows.push_back(SummaryRow{r.agent, r.building, r.noise_sigma});
        return rows.back();
    };
    // First pass: means.
    for (const auto& r : runs) {
        SummaryRow& row = find_row(r);
        row.runs += 1;
        row.energy_mean += r.kpis.energy_kwh;
        row.avg_dev_mean += r.kpis.avg_dev_k;
        row.max_dev_mean += r.kpis.max_dev_k;
    }
    for (auto& row : rows) {
        row.energy_mean /= row.runs;
        row.avg_dev_mean /= row.runs;
        row.max_dev_mean /= row.runs;
    }
    // Second pass: population standard deviation across seeds.
    for (const auto& r : runs) {
        SummaryRow& row = find_row(r);
        const double de = r.kpis.energy_kwh - row.energy_mean;
        const double da = r.kpis.avg_dev_k - row.avg_dev_mean;
        const double dm = r.kpis.max_dev_k - row.max_dev_mean;
        row.energy_std += de * de;
        row.avg_dev_std += da * da;
        row.max_dev_std += dm * dm;
    }
    for (auto& row : rows) {
        row.energy_std = std::sqrt(row.energy_std / row.runs);
        row.avg_dev_std = std::sqrt(row.avg_dev_std / row.runs);
        row.max_dev_std = std::sqrt(row.max_dev_std / row.runs);
    }
    return rows;
}

void write_summary(const std::vector<SummaryRow>& rows, const std::string& out_dir) {
    {
        std::ofstream csv(out_dir + "/summary.csv");
        if (!csv) {
            throw ConfigError("cannot write summary.csv in " + out_dir);
        }
        csv << "agent,building,noise_sigma,runs,energy_kwh_mean,energy_kwh_std,"
               "avg_dev_k_mean,avg_dev_k_std,max_dev_k_mean,max_dev_k_std\n";
        char buf[512];
        for (const auto& r : rows) {
            std::snprintf(buf, sizeof(buf), "%s,%s,%g,%d,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g\n",
                          r.agent.c_str(), r.building.c_str(), r.noise_sigma, r.runs,
                          r.energy_mean, r.energy_std, r.avg_dev_mean, r.avg_dev_std,
                          r.max_dev_mean, r.max_dev_std);
            csv << buf;
        }
    }
    {
        // Plain-text pivot: one row per agent, energy/avg/max per scenario.
        std::vector<std::pair<std::string, double>> scenarios;
        std::vector<std::string> agents;
        for (const auto& r : rows) {
            const std::pair<std::string, double> sc{r.building, r.noise_sigma};
            bool seen = false;
            for (const auto& s : scenarios) seen = seen || s == sc;
            if (!seen) scenarios.push_back(sc);
            bool seen_agent = false;
            for (const auto& a : agents) seen_agent = seen_agent || a == r.agent;
            if (!seen_agent) agents.push_back(r.agent);
        }
        std::ofstream txt(out_dir + "/summary.txt");
        char buf[256];
        txt << "agent";
        for (const auto& sc : scenarios) {
            std::snprintf(buf, sizeof(buf), " | %s noise=%g: energy avg max", sc.first.c_str(),
                          sc.second);
            txt << buf;
        }
        txt << "\n";
        for (const auto& agent : agents) {
            txt << agent;
            for (const auto& sc : scenarios) {
                bool found = false;
                for (const auto& r : rows) {
                    if (r.agent == agent && r.building == sc.first &&
                        r.noise_sigma == sc.second) {
                        std::snprintf(buf, sizeof(buf), " | %.1f %.4f %.3f", r.energy_mean,
                                      r.avg_dev_mean, r.max_dev_mean);
                        txt << buf;
                        found = true;
                        break;
                    }
                }
                if (!found) txt << " | - - -";
            }
            txt << "\n";
        }
    }
}

void write_report(const std::vector<std::string>& run_dirs, const std::string& out_dir) {
    if (run_dirs.empty()) {
        throw ConfigError("report: no run directories given");
    }
    fs::create_directories(out_dir);
    std::vector<RunResult> runs;
    std::ofstream series(out_dir + "/series.csv");
    if (!series) {
        throw ConfigError("cannot write series.csv in " + out_dir);
    }
    series << "run,episode,energy_kwh,avg_dev_k,max_dev_k,beta_or_barrier\n";
    char buf[512];
    for (const auto& dir : run_dirs) {
        std::ifstream manifest(dir + "/run.json");
        if (!manifest) {
            throw ConfigError("report: missing run.json in " + dir);
        }
        json j;
        try {
            manifest >> j;
        } catch (const json::parse_error& e) {
            throw ConfigError(dir + "/run.json: JSON parse error: " + e.what());
        }
        RunResult run;
        run.agent = j.at("agent").get<std::string>();
        run.building = j.at("building").get<std::string>();
        run.noise_sigma = j.at("noise_sigma").get<double>();
        run.seed = j.at("seed").get<std::uint64_t>();
        run.dir = dir;
        run.kpis = read_kpis_json(dir + "/kpis.json");
        runs.push_back(run);

        const std::string run_id = fs::path(dir).filename().string();
        if (fs::exists(dir + "/metrics.csv")) {
            for (const auto& row : read_metrics_csv(dir + "/metrics.csv")) {
                std::snprintf(buf, sizeof(buf), "%s,%d,%.17g,%.17g,%.17g,%.17g\n",
                              run_id.c_str(), row.episode, row.energy_kwh, row.avg_dev_k,
                              row.max_dev_k, row.beta_or_barrier);
                series << buf;
            }
        } else {
            // Controllers have a single evaluation point.
            std::snprintf(buf, sizeof(buf), "%s,0,%.17g,%.17g,%.17g,0\n", run_id.c_str(),
                          run.kpis.energy_kwh, run.kpis.avg_dev_k, run.kpis.max_dev_k);
            series << buf;
        }
    }
    write_summary(summarize(runs), out_dir);
}

}  // namespace heatctrl
