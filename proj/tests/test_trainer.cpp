#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <vector>

#include "heatctrl/barrier_math.hpp"
#include "heatctrl/building_config.hpp"
#include "heatctrl/errors.hpp"
#include "heatctrl/replay_buffer.hpp"
#include "heatctrl/trainer.hpp"

using namespace heatctrl;

namespace {

TrainerConfig small_cfg(Algorithm alg, std::uint64_t seed = 1) {
    TrainerConfig cfg;
    cfg.algorithm = alg;
    cfg.hidden = {16, 16};
    cfg.batch_size = 64;
    cfg.buffer_capacity = 4096;
    cfg.seed = seed;
    return cfg;
}

Batch random_batch(int n, std::uint64_t seed) {
    CounterRng rng(seed);
    Batch b;
    b.obs.resize(kObsDim, n);
    b.next_obs.resize(kObsDim, n);
    b.action.resize(n);
    b.reward.resize(n);
    b.cost.resize(n);
    for (int i = 0; i < b.obs.size(); ++i) b.obs.data()[i] = rng.uniform(-1.0, 1.0);
    for (int i = 0; i < b.next_obs.size(); ++i) b.next_obs.data()[i] = rng.uniform(-1.0, 1.0);
    for (int i = 0; i < n; ++i) {
        b.action(i) = rng.uniform(-1.0, 1.0);
        b.reward(i) = rng.uniform(-1.0, 0.0);
        b.cost(i) = rng.uniform(0.0, 0.5);
    }
    return b;
}

std::vector<double> actor_params(const Trainer& t) {
    std::vector<double> p(t.actor().param_count());
    t.actor().get_params(p);
    return p;
}

SimEnv tiny_env(int days = 1) {
    const BuildingConfig b = parse_building_config(R"({
        "name": "test",
        "variant": "three_state",
        "h_ve_tr": 300.0,
        "c_bldg_specific": 250000.0,
        "a_floor": 200.0,
        "h_room": 2.5,
        "water_volume": 0.5,
        "h_rad_con": 320.0,
        "mdot_hp": 0.25,
        "wall_split": 0.5,
        "h_wall": 900.0,
        "heat_pump": {"source": "ground", "source_temp_c": 10.0}
    })", "inline");
    DisturbanceSeries series = synth_weather(1, days);
    apply_gains(series, b.params.a_floor, b.gains);
    EnvConfig cfg;
    return SimEnv(b.params, b.heat_pump, series, cfg);
}

}  // namespace

TEST_SUITE_BEGIN("trainer");

TEST_CASE("replay buffer FIFO overwrite at desk capacity") {
    ReplayBuffer buf(1000);
    const int extra = 137;
    for (int i = 0; i < 1000 + extra; ++i) {
        ReplayBuffer::Entry e;
        e.reward = static_cast<double>(i);
        buf.push(e);
    }
    CHECK(buf.size() == 1000u);
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 0; i < buf.size(); ++i) {
        lo = std::min(lo, buf[i].reward);
        hi = std::max(hi, buf[i].reward);
    }
    CHECK(lo == static_cast<double>(extra));  // the oldest `extra` records are gone
    CHECK(hi == 1136.0);
}

TEST_CASE("replay sampling stays inside the filled region") {
    ReplayBuffer buf(100);
    for (int i = 0; i < 10; ++i) buf.push(ReplayBuffer::Entry{});
    CounterRng rng(1);
    std::vector<std::size_t> idx;
    buf.sample_indices(256, rng, idx);
    for (std::size_t i : idx) CHECK(i < 10u);
    ReplayBuffer empty(10);
    CHECK_THROWS_AS(empty.sample_indices(1, rng, idx), std::logic_error);
}

TEST_CASE("critic targets equal immediate reward and cost when gamma is zero") {
    TrainerConfig cfg = small_cfg(Algorithm::csac_lb);
    cfg.gamma = 0.0;
    Trainer t(cfg);
    const Batch b = random_batch(32, 5);

    // Expected mean-squared losses against targets y_r = r, y_c = c.
    auto expected_loss = [&](Mlp& net, const Eigen::VectorXd& y) {
        Eigen::MatrixXd x(kObsDim + 1, b.action.size());
        x.topRows(kObsDim) = b.obs;
        x.row(kObsDim) = b.action.transpose();
        const Eigen::VectorXd q = net.forward(x).row(0).transpose();
        return (q - y).squaredNorm() / static_cast<double>(b.action.size());
    };
    const double er = 0.5 * (expected_loss(t.reward_critic(0), b.reward) +
                             expected_loss(t.reward_critic(1), b.reward));
    const double ec = 0.5 * (expected_loss(t.cost_critic(0), b.cost) +
                             expected_loss(t.cost_critic(1), b.cost));
    const CriticUpdateResult r = t.critic_update(b);
    CHECK(r.qr_loss == doctest::Approx(er).epsilon(1e-12));
    CHECK(r.qc_loss == doctest::Approx(ec).epsilon(1e-12));

    CHECK_THROWS_AS(t.critic_update(Batch{}), std::invalid_argument);
}

TEST_CASE("cost bootstrap uses the max of the target pair") {
    TrainerConfig cfg = small_cfg(Algorithm::csac_lb);
    cfg.gamma = 0.5;
    Trainer t(cfg);
    // Constant-output critics: online 0, targets 5 and 7.
    t.cost_critic(0).zero_init();
    t.cost_critic(1).zero_init();
    t.cost_target(0).zero_init();
    t.cost_target(1).zero_init();
    t.cost_target(0).biases().back()(0) = 5.0;
    t.cost_target(1).biases().back()(0) = 7.0;

    Batch b = random_batch(16, 9);
    b.cost.setConstant(1.0);
    const CriticUpdateResult r = t.critic_update(b);
    // y_c = 1 + 0.5 * max(5,7) = 4.5 against online 0: loss 20.25 per twin.
    CHECK(r.qc_loss == doctest::Approx(4.5 * 4.5).epsilon(1e-12));
}

TEST_CASE("constant-reward one-state MDP converges to the geometric value") {
    TrainerConfig cfg = small_cfg(Algorithm::csac_lb, 3);
    cfg.auto_alpha = false;
    cfg.alpha_init = 1e-12;
    cfg.lr = 3e-3;
    cfg.tau = 0.05;  // faster target tracking so the fixed point is reached quickly
    Trainer t(cfg);

    ReplayBuffer buf(512);
    CounterRng rng(17);
    for (int i = 0; i < 512; ++i) {
        ReplayBuffer::Entry e;
        e.obs = {20.0, 20.0, 20.0, 20.0, 0.0};  // normalizes to the zero vector
        e.next_obs = e.obs;
        e.action = rng.uniform(-1.0, 1.0);
        e.reward = 1.0;
        e.cost = 0.5;
        buf.push(e);
    }
    std::vector<std::size_t> idx;
    Batch b;
    double qr_now = 0.0, qc_now = 0.0;
    for (int it = 0; it < 30000; ++it) {
        buf.sample_indices(64, t.rng(), idx);
        b = t.make_batch(buf, idx);
        t.critic_update(b);
        if (it % 500 == 0 || it == 29999) {
            Eigen::MatrixXd x(kObsDim + 1, 1);
            x.topRows(kObsDim).setZero();
            x(kObsDim, 0) = 0.0;
            qr_now = std::min(t.reward_critic(0).forward(x)(0, 0),
                              t.reward_critic(1).forward(x)(0, 0));
            qc_now = std::max(t.cost_critic(0).forward(x)(0, 0),
                              t.cost_critic(1).forward(x)(0, 0));
            if (std::abs(qr_now - 100.0) < 3.0 && std::abs(qc_now - 50.0) < 1.5) break;
        }
    }
    CHECK(std::abs(qr_now - 100.0) / 100.0 < 0.05);
    CHECK(std::abs(qc_now - 50.0) / 50.0 < 0.05);
}

TEST_CASE("beta moves with the constraint gap sign") {
    Trainer t(small_cfg(Algorithm::sac_lag));
    const double d = t.config().cost_limit_d;

    const double beta0 = t.beta();
    std::vector<double> hot(64, d + 5.0);
    const double beta_up = t.beta_update_from_qc(hot);
    CHECK(beta_up > beta0);

    Trainer t2(small_cfg(Algorithm::sac_lag));
    std::vector<double> cold(64, d - 5.0);
    const double beta_down = t2.beta_update_from_qc(cold);
    CHECK(beta_down < beta0);
    CHECK(beta_down > 0.0);  // softplus keeps the multiplier non-negative
}

TEST_CASE("sac_lag with beta = 0 gives the plain SAC actor loss") {
    TrainerConfig lag_cfg = small_cfg(Algorithm::sac_lag, 11);
    lag_cfg.beta_raw_init = -800.0;  // exp underflows: softplus(-800) is exactly 0
    Trainer lag(lag_cfg);
    Trainer sac(small_cfg(Algorithm::sac_penalty, 11));
    const Batch b = random_batch(32, 21);
    CHECK(softplus(-800.0) == 0.0);
    CHECK(lag.beta() == 0.0);
    CHECK(lag.actor_loss(b, CounterRng(77)) == sac.actor_loss(b, CounterRng(77)));
}

TEST_CASE("csac_lb actor update reduces to plain SAC bitwise below the limit") {
    Trainer lb(small_cfg(Algorithm::csac_lb, 13));
    Trainer sac(small_cfg(Algorithm::sac_penalty, 13));
    const Batch b = random_batch(64, 31);

    // Random-init critics emit values far below d = 10.
    {
        Eigen::MatrixXd x(kObsDim + 1, b.action.size());
        x.topRows(kObsDim) = b.obs;
        x.row(kObsDim) = b.action.transpose();
        const Eigen::VectorXd qc =
            lb.cost_critic(0).forward(x).row(0).transpose().cwiseMax(
                lb.cost_critic(1).forward(x).row(0).transpose());
        REQUIRE(qc.maxCoeff() < lb.config().cost_limit_d);
    }

    lb.actor_update(b);
    sac.actor_update(b);
    const auto pl = actor_params(lb);
    const auto ps = actor_params(sac);
    REQUIRE(pl.size() == ps.size());
    CHECK(std::memcmp(pl.data(), ps.data(), pl.size() * sizeof(double)) == 0);
    CHECK(lb.alpha() == sac.alpha());
}

TEST_CASE("actor gradients match finite differences on a frozen toy network") {
    for (Algorithm alg : {Algorithm::sac_penalty, Algorithm::sac_lag, Algorithm::csac_lb}) {
        TrainerConfig cfg = small_cfg(alg, 19);
        cfg.hidden = {2};
        Trainer t(cfg);
        if (alg == Algorithm::csac_lb) {
            // Shift cost critics above the limit so the barrier path is live.
            t.cost_critic(0).biases().back()(0) += 13.0;
            t.cost_critic(1).biases().back()(0) += 13.0;
        }
        const Batch b = random_batch(16, 23);
        const CounterRng noise = t.rng();  // the stream actor_update will consume

        Trainer updated = t;
        updated.actor_update(b);
        std::vector<double> analytic(updated.actor().param_count());
        updated.actor().get_grads(analytic);

        std::vector<double> params = actor_params(t);
        const double h = 1e-6;
        for (std::size_t k = 0; k < params.size(); ++k) {
            const double saved = params[k];
            params[k] = saved + h;
            t.actor().set_params(params);
            const double up = t.actor_loss(b, noise);
            params[k] = saved - h;
            t.actor().set_params(params);
            const double down = t.actor_loss(b, noise);
            params[k] = saved;
            t.actor().set_params(params);
            const double fd = (up - down) / (2.0 * h);
            CHECK(std::abs(analytic[k] - fd) / std::max(1.0, std::abs(fd)) < 1e-4);
        }
    }
}

TEST_CASE("training bookkeeping: one episode runs 96 steps and one eval row") {
    TrainerConfig cfg = small_cfg(Algorithm::csac_lb, 23);
    cfg.hidden = {8, 8};
    Trainer t(cfg);
    SimEnv env = tiny_env();
    const auto before = actor_params(t);
    const TrainResult result = t.train(env, 1);
    CHECK(result.metrics.size() == 1u);
    CHECK(result.metrics[0].episode == 1);
    CHECK(result.final_eval_episode.size() == env.series().size());
    // 96 env steps sit entirely inside the 100-step warmup: no updates ran.
    CHECK(actor_params(t) == before);
}

TEST_CASE("metrics row count is ceil(episodes / eval cadence)") {
    TrainerConfig cfg = small_cfg(Algorithm::sac_penalty, 29);
    cfg.penalty = 2.0;
    cfg.hidden = {8, 8};
    cfg.batch_size = 32;
    Trainer t(cfg);
    SimEnv env = tiny_env();
    const auto out_dir =
        (std::filesystem::temp_directory_path() / "hc_train_bookkeeping").string();
    const TrainResult result = t.train(env, 25, out_dir);
    CHECK(result.metrics.size() == 3u);  // evals after episodes 10, 20, 25
    CHECK(result.metrics.back().episode == 25);
    const auto rows = read_metrics_csv(out_dir + "/metrics.csv");
    CHECK(rows.size() == 3u);
    CHECK(std::filesystem::exists(out_dir + "/checkpoint.bin"));
    CHECK(std::filesystem::exists(out_dir + "/eval_episode.csv"));
    CHECK(std::filesystem::exists(out_dir + "/kpis.json"));
}

TEST_CASE("checkpoint round-trips parameters, scalars, and rng state") {
    TrainerConfig cfg = small_cfg(Algorithm::sac_lag, 31);
    Trainer t(cfg);
    const Batch b = random_batch(32, 41);
    t.critic_update(b);
    t.actor_update(b);

    const auto dir = std::filesystem::temp_directory_path() / "hc_ckpt";
    std::filesystem::create_directories(dir);
    const std::string bin = (dir / "checkpoint.bin").string();
    const std::string sidecar = (dir / "checkpoint.json").string();
    t.save_checkpoint(bin, sidecar);
    Trainer loaded = Trainer::load_checkpoint(bin, sidecar);

    CHECK(loaded.log_alpha() == t.log_alpha());
    CHECK(loaded.beta_raw() == t.beta_raw());
    CHECK(loaded.rng().key() == t.rng().key());
    CHECK(loaded.rng().counter() == t.rng().counter());
    CHECK(actor_params(loaded) == actor_params(t));
    std::vector<double> q0(t.cost_target(1).param_count()), q1(q0.size());
    t.cost_target(1).get_params(q0);
    loaded.cost_target(1).get_params(q1);
    CHECK(q0 == q1);

    // The reloaded deterministic policy behaves identically.
    const std::array<double, kObsDim> probe{0.1, -0.4, 0.2, 0.0, 0.3};
    CHECK(policy_mean_action(loaded.actor(), probe) == policy_mean_action(t.actor(), probe));

    CHECK_THROWS_AS(Trainer::load_checkpoint("/nonexistent.bin", sidecar), ConfigError);
}

TEST_CASE("poisoned network aborts with a divergence dump") {
    TrainerConfig cfg = small_cfg(Algorithm::csac_lb, 37);
    cfg.warmup_steps = 0;
    Trainer t(cfg);
    t.actor().biases().back()(0) = std::nan("");
    SimEnv env = tiny_env();
    const auto out_dir =
        (std::filesystem::temp_directory_path() / "hc_divergence").string();
    CHECK_THROWS_AS(t.train(env, 1, out_dir), TrainingDivergenceError);
    CHECK(std::filesystem::exists(out_dir + "/divergence.txt"));
    CHECK(std::filesystem::exists(out_dir + "/last_good_params.bin"));
}

TEST_CASE("evaluate produces a finite report for a random actor") {
    Trainer t(small_cfg(Algorithm::csac_lb, 41));
    SimEnv env = tiny_env();
    const KpiReport k = t.evaluate(env);
    CHECK(std::isfinite(k.energy_kwh));
    CHECK(std::isfinite(k.avg_dev_k));
    CHECK(k.energy_kwh >= 0.0);
    CHECK(k.max_dev_k >= k.avg_dev_k);
}

TEST_CASE("fixed extreme policies bracket the energy/comfort trade-off") {
    // tanh of a huge positive/negative mean pins the action at +/-1.
    SimEnv env = tiny_env(2);
    Mlp max_actor({kObsDim, 4, 2});
    max_actor.zero_init();
    max_actor.biases().back()(0) = 60.0;
    Mlp min_actor = max_actor;
    min_actor.biases().back()(0) = -60.0;

    std::vector<Transition> hot_ep, cold_ep;
    const KpiReport hot = evaluate_policy(max_actor, env, 1, &hot_ep);
    const KpiReport cold = evaluate_policy(min_actor, env, 1, &cold_ep);
    // Winter week: minimum supply spends a trickle (the return falls below
    // the 20 degC floor), far below the always-max policy, and freezes the
    // room; maximum supply never underheats.
    CHECK(cold.energy_kwh < 0.1 * hot.energy_kwh);
    CHECK(hot.energy_kwh > 0.0);
    double hot_underheat = 0.0, cold_underheat = 0.0;
    for (const auto& tr : hot_ep) hot_underheat = std::max(hot_underheat, tr.cost);
    for (const auto& tr : cold_ep) cold_underheat = std::max(cold_underheat, tr.cost);
    CHECK(hot_underheat == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(cold_underheat > 1.0);

    // Mild weather keeps the return above the minimum supply: the idle policy
    // spends exactly nothing.
    const BuildingConfig b = parse_building_config(R"({
        "name": "warm", "variant": "two_state",
        "h_ve_tr": 300.0, "c_bldg_specific": 250000.0, "a_floor": 200.0,
        "h_room": 2.5, "water_volume": 0.5, "h_rad_con": 320.0,
        "mdot_hp": 0.25, "wall_split": 0.5, "h_wall": 900.0
    })", "inline");
    DisturbanceSeries warm_series;
    warm_series.start_unix_s = 1609459200;
    warm_series.t_amb.assign(96, 25.0);
    warm_series.q_gain.assign(96, 500.0);
    SimEnv warm_env(b.params, b.heat_pump, warm_series, EnvConfig{});
    const KpiReport idle = evaluate_policy(min_actor, warm_env, 1);
    CHECK(idle.energy_kwh == 0.0);
}

TEST_SUITE_END();
