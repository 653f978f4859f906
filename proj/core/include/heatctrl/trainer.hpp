#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "heatctrl/kpi.hpp"
#include "heatctrl/mlp.hpp"
#include "heatctrl/policy.hpp"
#include "heatctrl/replay_buffer.hpp"
#include "heatctrl/rng.hpp"
#include "heatctrl/sim_env.hpp"

namespace heatctrl {

enum class Algorithm { sac_penalty, sac_lag, csac_lb };

const char* to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

struct TrainerConfig {
    Algorithm algorithm = Algorithm::csac_lb;
    double penalty = 0.0;  // reward shaping magnitude for sac_penalty (2 or 30)
    int batch_size = 256;
    std::vector<int> hidden = {256, 256};
    double gamma = 0.99;
    double lr = 1e-3;
    double tau = 0.005;
    int warmup_steps = 100;   // uniform random env steps before updates start
    int update_every = 1;     // gradient updates per env step cadence
    std::size_t buffer_capacity = 3000000;
    double cost_limit_d = 10.0;
    double barrier_mu = 10.0;
    bool auto_alpha = true;
    double alpha_init = 0.2;
    double target_entropy = -1.0;  // -(action dim)
    double beta_raw_init = 0.0;    // beta = softplus(raw)
    int eval_every_episodes = 10;
    std::uint64_t seed = 0;
};

void validate(const TrainerConfig& cfg);

// Column-wise batch with observations already normalized and, for the
// penalty variant, the shaped reward.
struct Batch {
    Eigen::MatrixXd obs;       // (kObsDim, B)
    Eigen::VectorXd action;    // (B)
    Eigen::VectorXd reward;    // (B)
    Eigen::VectorXd cost;      // (B)
    Eigen::MatrixXd next_obs;  // (kObsDim, B)
};

struct CriticUpdateResult {
    double qr_loss = 0.0;
    double qc_loss = 0.0;
};

struct ActorUpdateResult {
    double actor_loss = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double mean_qc = 0.0;
    double barrier_active_frac = 0.0;  // share of batch with qc > d
};

struct MetricsRow {
    int episode = 0;
    double energy_kwh = 0.0;
    double avg_dev_k = 0.0;
    double max_dev_k = 0.0;
    double beta_or_barrier = 0.0;
};

struct TrainResult {
    std::vector<MetricsRow> metrics;
    KpiReport final_kpis;
    std::vector<Transition> final_eval_episode;
};

// Soft actor-critic training stack with twin reward critics, twin cost
// critics (bootstrapped with the max of the target pair), and three actor
// objectives selected by TrainerConfig::algorithm:
//   sac_penalty: plain SAC on the shaped reward r - penalty * 1[cost > 0]
//   sac_lag:     alpha logp - Qr + beta Qc with beta = softplus(raw)
//   csac_lb:     alpha logp - Qr + psi_star(Qc) (shifted smoothed log barrier)
class Trainer {
public:
    explicit Trainer(TrainerConfig cfg);

    Batch make_batch(const ReplayBuffer& buffer, std::span<const std::size_t> indices) const;

    CriticUpdateResult critic_update(const Batch& batch);
    ActorUpdateResult actor_update(const Batch& batch);

    // Actor objective of the current parameters on a batch, with Gaussian
    // noise drawn from the provided stream. No side effects; lets gradient
    // checks re-evaluate the loss under parameter perturbations with the
    // exact noise realization an update would see.
    double actor_loss(const Batch& batch, CounterRng rng) const;

    // One sample + critic + actor cycle.
    void update(const ReplayBuffer& buffer);

    // Runs the training protocol: warmup_steps random actions, one update per
    // env step afterwards, 96-step training episodes with randomized resets,
    // a deterministic full-series evaluation every eval_every_episodes (and
    // after the final episode), metrics CSV and checkpoint when out_dir is
    // non-empty. Divergence aborts with a diagnostic dump and the last
    // evaluation-time checkpoint retained.
    TrainResult train(SimEnv& env, int episodes, const std::string& out_dir = "");

    KpiReport evaluate(SimEnv& env, std::vector<Transition>* episode_out = nullptr) const;

    // The exact multiplier step used by actor_update, exposed for tests:
    // gradient of E[beta (d - qc)] chained through the softplus.
    double beta_update_from_qc(std::span<const double> qc);

    double alpha() const;
    double beta() const;
    double log_alpha() const { return log_alpha_; }
    double beta_raw() const { return beta_raw_; }
    const TrainerConfig& config() const { return cfg_; }

    Mlp& actor() { return actor_; }
    const Mlp& actor() const { return actor_; }
    Mlp& reward_critic(int i) { return i == 0 ? qr1_ : qr2_; }
    Mlp& cost_critic(int i) { return i == 0 ? qc1_ : qc2_; }
    Mlp& reward_target(int i) { return i == 0 ? qr1t_ : qr2t_; }
    Mlp& cost_target(int i) { return i == 0 ? qc1t_ : qc2t_; }
    CounterRng& rng() { return rng_; }

    void save_checkpoint(const std::string& bin_path, const std::string& json_path) const;
    static Trainer load_checkpoint(const std::string& bin_path, const std::string& json_path);

private:
    double shaped_reward(double reward, double cost) const;
    void snapshot_params();
    void write_divergence_dump(const std::string& out_dir, const std::string& what,
                               int episode, long total_steps) const;

    TrainerConfig cfg_;
    Mlp actor_, qr1_, qr2_, qc1_, qc2_;
    Mlp qr1t_, qr2t_, qc1t_, qc2t_;
    Adam opt_actor_, opt_qr1_, opt_qr2_, opt_qc1_, opt_qc2_, opt_alpha_, opt_beta_;
    double log_alpha_ = 0.0;
    double beta_raw_ = 0.0;
    CounterRng rng_;
    ActorUpdateResult last_actor_result_;
    std::vector<double> last_good_params_;  // refreshed at every evaluation
    mutable std::vector<std::size_t> index_scratch_;
};

// Deterministic-policy rollout over one eval-mode episode.
KpiReport evaluate_policy(const Mlp& actor, SimEnv& env, std::uint64_t eval_seed,
                          std::vector<Transition>* episode_out = nullptr);

void write_metrics_csv(const std::vector<MetricsRow>& rows, const std::string& path);
std::vector<MetricsRow> read_metrics_csv(const std::string& path);

}  // namespace heatctrl
