#include <benchmark/benchmark.h>

#include "heatctrl/barrier_math.hpp"
#include "heatctrl/mlp.hpp"
#include "heatctrl/policy.hpp"
#include "heatctrl/replay_buffer.hpp"
#include "heatctrl/rng.hpp"
#include "heatctrl/sim_env.hpp"
#include "heatctrl/thermal_model.hpp"
#include "heatctrl/trainer.hpp"

namespace {

using namespace heatctrl;

BuildingParams bench_params() {
    RawBuildingParams raw;
    raw.h_ve_tr = 300.0;
    raw.c_bldg_specific = 250000.0;
    raw.a_floor = 200.0;
    raw.h_room = 2.5;
    raw.water_volume = 0.5;
    raw.h_rad_con = 320.0;
    raw.mdot_hp = 0.25;
    raw.wall_split = 0.5;
    raw.h_wall = 900.0;
    raw.variant = ModelVariant::three_state;
    return derive_params(raw);
}

void BM_RhsThreeState(benchmark::State& state) {
    const BuildingParams p = bench_params();
    const BuildingState s{20.5, 19.8, 31.0};
    const DisturbanceSample d{-3.0, 600.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(rhs_three_state(s, d, 42.0, p));
    }
}
BENCHMARK(BM_RhsThreeState);

void BM_IntegrateStep(benchmark::State& state) {
    const BuildingParams p = bench_params();
    BuildingState s{20.5, 19.8, 31.0};
    const DisturbanceSample d{-3.0, 600.0};
    for (auto _ : state) {
        s = integrate_step(s, d, 42.0, p);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_IntegrateStep);

void BM_EnvStep(benchmark::State& state) {
    const BuildingParams p = bench_params();
    HeatPumpModel hp;
    hp.source = HeatSource::ground;
    DisturbanceSeries series = synth_weather(1, 7);
    GainsConfig gains = default_residential_gains(30.0, 0.6);
    apply_gains(series, p.a_floor, gains);
    EnvConfig cfg;
    SimEnv env(p, hp, series, cfg);
    env.reset(ResetMode::eval, 1);
    double a = -1.0;
    for (auto _ : state) {
        const Transition tr = env.step(a);
        a = -a * 0.99;
        if (tr.done) env.reset(ResetMode::eval, 1);
        benchmark::DoNotOptimize(tr.reward);
    }
}
BENCHMARK(BM_EnvStep);

void BM_PsiTilde(benchmark::State& state) {
    double x = -2.0;
    for (auto _ : state) {
        x = x >= 1.0 ? -2.0 : x + 1e-6;
        benchmark::DoNotOptimize(psi_tilde(x, 10.0));
    }
}
BENCHMARK(BM_PsiTilde);

void BM_MlpForwardBatch256(benchmark::State& state) {
    CounterRng rng(1);
    Mlp net({kObsDim + 1, 256, 256, 1});
    net.init_random(rng);
    Eigen::MatrixXd x(kObsDim + 1, 256);
    for (int i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-1.0, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(net.forward(x));
    }
}
BENCHMARK(BM_MlpForwardBatch256);

void BM_TrainerUpdate(benchmark::State& state) {
    TrainerConfig cfg;
    cfg.hidden = {64, 64};
    cfg.seed = 3;
    Trainer trainer(cfg);
    ReplayBuffer buffer(100000);
    CounterRng rng(9);
    for (int i = 0; i < 2048; ++i) {
        ReplayBuffer::Entry e;
        for (int d = 0; d < kObsDim; ++d) {
            e.obs[d] = rng.uniform(-10.0, 40.0);
            e.next_obs[d] = rng.uniform(-10.0, 40.0);
        }
        e.action = rng.uniform(-1.0, 1.0);
        e.reward = rng.uniform(-1.0, 0.0);
        e.cost = rng.uniform(0.0, 1.0);
        buffer.push(e);
    }
    for (auto _ : state) {
        trainer.update(buffer);
    }
}
BENCHMARK(BM_TrainerUpdate);

}  // namespace

BENCHMARK_MAIN();
