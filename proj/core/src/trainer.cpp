#include "heatctrl/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "heatctrl/barrier_math.hpp"
#include "heatctrl/errors.hpp"

namespace heatctrl {

namespace {

constexpr char kCheckpointMagic[4] = {'H', 'C', 'K', 'P'};
constexpr std::uint32_t kCheckpointVersion = 1;

Eigen::MatrixXd stack_obs_action(const Eigen::MatrixXd& obs, const Eigen::VectorXd& action) {
    Eigen::MatrixXd x(obs.rows() + 1, obs.cols());
    x.topRows(obs.rows()) = obs;
    x.row(obs.rows()) = action.transpose();
    return x;
}

}  // namespace

const char* to_string(Algorithm a) {
    switch (a) {
        case Algorithm::sac_penalty: return "sac_penalty";
        case Algorithm::sac_lag: return "sac_lag";
        case Algorithm::csac_lb: return "csac_lb";
    }
    return "unknown";
}

Algorithm algorithm_from_string(const std::string& name) {
    if (name == "sac_penalty") return Algorithm::sac_penalty;
    if (name == "sac_lag") return Algorithm::sac_lag;
    if (name == "csac_lb") return Algorithm::csac_lb;
    throw ConfigError("unknown algorithm '" + name +
                      "' (expected sac_penalty|sac_lag|csac_lb)");
}

void validate(const TrainerConfig& cfg) {
    if (cfg.batch_size < 1) throw ConfigError("trainer: batch_size must be >= 1");
    if (cfg.hidden.empty()) throw ConfigError("trainer: hidden layer list is empty");
    for (int h : cfg.hidden) {
        if (h < 1) throw ConfigError("trainer: hidden sizes must be >= 1");
    }
    if (!(cfg.lr > 0.0)) throw ConfigError("trainer: lr must be positive");
    if (!(cfg.tau > 0.0 && cfg.tau <= 1.0)) throw ConfigError("trainer: tau must lie in (0,1]");
    if (!(cfg.gamma >= 0.0 && cfg.gamma < 1.0)) throw ConfigError("trainer: gamma must lie in [0,1)");
    if (cfg.warmup_steps < 0) throw ConfigError("trainer: warmup_steps must be >= 0");
    if (cfg.update_every < 1) throw ConfigError("trainer: update_every must be >= 1");
    if (cfg.buffer_capacity == 0) throw ConfigError("trainer: buffer_capacity must be positive");
    if (cfg.algorithm == Algorithm::csac_lb && !(cfg.barrier_mu > 1.0)) {
        throw ConfigError("trainer: csac_lb requires barrier_mu > 1");
    }
    if (cfg.algorithm == Algorithm::sac_penalty && cfg.penalty < 0.0) {
        throw ConfigError("trainer: penalty must be >= 0");
    }
    if (cfg.eval_every_episodes < 1) throw ConfigError("trainer: eval_every_episodes must be >= 1");
}

Trainer::Trainer(TrainerConfig cfg) : cfg_(std::move(cfg)), rng_(cfg_.seed, 7) {
    validate(cfg_);
    std::vector<int> actor_sizes;
    actor_sizes.push_back(kObsDim);
    actor_sizes.insert(actor_sizes.end(), cfg_.hidden.begin(), cfg_.hidden.end());
    actor_sizes.push_back(2);  // mean, log-std
    std::vector<int> critic_sizes;
    critic_sizes.push_back(kObsDim + 1);
    critic_sizes.insert(critic_sizes.end(), cfg_.hidden.begin(), cfg_.hidden.end());
    critic_sizes.push_back(1);

    actor_ = Mlp(actor_sizes);
    qr1_ = Mlp(critic_sizes);
    qr2_ = Mlp(critic_sizes);
    qc1_ = Mlp(critic_sizes);
    qc2_ = Mlp(critic_sizes);
    actor_.init_random(rng_);
    qr1_.init_random(rng_);
    qr2_.init_random(rng_);
    qc1_.init_random(rng_);
    qc2_.init_random(rng_);
    qr1t_ = qr1_;
    qr2t_ = qr2_;
    qc1t_ = qc1_;
    qc2t_ = qc2_;

    opt_actor_ = Adam(cfg_.lr);
    opt_qr1_ = Adam(cfg_.lr);
    opt_qr2_ = Adam(cfg_.lr);
    opt_qc1_ = Adam(cfg_.lr);
    opt_qc2_ = Adam(cfg_.lr);
    opt_alpha_ = Adam(cfg_.lr);
    opt_beta_ = Adam(cfg_.lr);
    opt_actor_.attach(actor_);
    opt_qr1_.attach(qr1_);
    opt_qr2_.attach(qr2_);
    opt_qc1_.attach(qc1_);
    opt_qc2_.attach(qc2_);

    log_alpha_ = std::log(cfg_.alpha_init);
    beta_raw_ = cfg_.beta_raw_init;
    snapshot_params();
}

double Trainer::alpha() const { return std::exp(log_alpha_); }
double Trainer::beta() const { return softplus(beta_raw_); }

double Trainer::shaped_reward(double reward, double cost) const {
    if (cfg_.algorithm == Algorithm::sac_penalty && cost > 0.0) {
        return reward - cfg_.penalty;
    }
    return reward;
}

Batch Trainer::make_batch(const ReplayBuffer& buffer,
                          std::span<const std::size_t> indices) const {
    if (indices.empty()) {
        throw std::invalid_argument("make_batch: empty batch");
    }
    const Eigen::Index n = static_cast<Eigen::Index>(indices.size());
    Batch b;
    b.obs.resize(kObsDim, n);
    b.next_obs.resize(kObsDim, n);
    b.action.resize(n);
    b.reward.resize(n);
    b.cost.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& e = buffer[indices[static_cast<std::size_t>(i)]];
        const auto obs_n = normalize_obs(e.obs);
        const auto next_n = normalize_obs(e.next_obs);
        for (int d = 0; d < kObsDim; ++d) {
            b.obs(d, i) = obs_n[d];
            b.next_obs(d, i) = next_n[d];
        }
        b.action(i) = e.action;
        b.reward(i) = shaped_reward(e.reward, e.cost);
        b.cost(i) = e.cost;
    }
    return b;
}

CriticUpdateResult Trainer::critic_update(const Batch& batch) {
    const Eigen::Index n = batch.action.size();
    if (n == 0) {
        throw std::invalid_argument("critic_update: empty batch");
    }
    const double a_coef = alpha();

    // Bootstrap targets from the target networks at a fresh policy action.
    PolicyBatch pb = policy_sample_batch(actor_, batch.next_obs, rng_);
    const Eigen::MatrixXd x_next = stack_obs_action(batch.next_obs, pb.action);
    const Eigen::VectorXd qr1t = qr1t_.forward(x_next).row(0).transpose();
    const Eigen::VectorXd qr2t = qr2t_.forward(x_next).row(0).transpose();
    const Eigen::VectorXd qc1t = qc1t_.forward(x_next).row(0).transpose();
    const Eigen::VectorXd qc2t = qc2t_.forward(x_next).row(0).transpose();

    const Eigen::VectorXd y_r =
        batch.reward.array() +
        cfg_.gamma * (qr1t.cwiseMin(qr2t).array() - a_coef * pb.logp.array());
    // Pessimistic cost bootstrap: max of the target pair, no entropy term.
    const Eigen::VectorXd y_c = batch.cost.array() + cfg_.gamma * qc1t.cwiseMax(qc2t).array();

    const Eigen::MatrixXd x = stack_obs_action(batch.obs, batch.action);
    const double inv_n = 1.0 / static_cast<double>(n);

    CriticUpdateResult result;
    auto fit = [&](Mlp& net, Adam& opt, const Eigen::VectorXd& target) {
        Mlp::Workspace ws;
        const Eigen::VectorXd q = net.forward_cached(x, ws).row(0).transpose();
        const Eigen::VectorXd diff = q - target;
        const double loss = diff.squaredNorm() * inv_n;
        Eigen::MatrixXd dy = (2.0 * inv_n) * diff.transpose();
        net.zero_grads();
        net.backward(ws, dy, true, nullptr);
        opt.step(net);
        return loss;
    };
    const double lr1 = fit(qr1_, opt_qr1_, y_r);
    const double lr2 = fit(qr2_, opt_qr2_, y_r);
    const double lc1 = fit(qc1_, opt_qc1_, y_c);
    const double lc2 = fit(qc2_, opt_qc2_, y_c);
    result.qr_loss = 0.5 * (lr1 + lr2);
    result.qc_loss = 0.5 * (lc1 + lc2);

    if (!std::isfinite(result.qr_loss) || !std::isfinite(result.qc_loss)) {
        throw TrainingDivergenceError("critic loss is not finite");
    }

    polyak_update(qr1t_, qr1_, cfg_.tau);
    polyak_update(qr2t_, qr2_, cfg_.tau);
    polyak_update(qc1t_, qc1_, cfg_.tau);
    polyak_update(qc2t_, qc2_, cfg_.tau);
    return result;
}

double Trainer::beta_update_from_qc(std::span<const double> qc) {
    const BetaLoss bl = beta_loss(beta(), cfg_.cost_limit_d, qc);
    const double grad_raw = bl.d_beta * sigmoid(beta_raw_);
    beta_raw_ = opt_beta_.scalar_step(beta_raw_, grad_raw);
    return beta();
}

double Trainer::actor_loss(const Batch& batch, CounterRng rng) const {
    const Eigen::Index n = batch.action.size();
    if (n == 0) {
        throw std::invalid_argument("actor_loss: empty batch");
    }
    const double a_coef = alpha();
    const PolicyBatch pb = policy_sample_batch(actor_, batch.obs, rng);
    const Eigen::MatrixXd x = stack_obs_action(batch.obs, pb.action);
    const Eigen::VectorXd qr =
        qr1_.forward(x).row(0).transpose().cwiseMin(qr2_.forward(x).row(0).transpose());
    Eigen::VectorXd qc;
    if (cfg_.algorithm != Algorithm::sac_penalty) {
        qc = qc1_.forward(x).row(0).transpose().cwiseMax(qc2_.forward(x).row(0).transpose());
    }
    double loss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        switch (cfg_.algorithm) {
            case Algorithm::sac_penalty:
                loss += a_coef * pb.logp(i) - qr(i);
                break;
            case Algorithm::sac_lag:
                loss += sac_lag_actor_term(qr(i), qc(i), beta(), a_coef, pb.logp(i));
                break;
            case Algorithm::csac_lb:
                loss += csac_lb_actor_term(qr(i), qc(i), a_coef, pb.logp(i), cfg_.barrier_mu,
                                           cfg_.cost_limit_d);
                break;
        }
    }
    return loss / static_cast<double>(n);
}

ActorUpdateResult Trainer::actor_update(const Batch& batch) {
    const Eigen::Index n = batch.action.size();
    if (n == 0) {
        throw std::invalid_argument("actor_update: empty batch");
    }
    const double a_coef = alpha();
    const double inv_n = 1.0 / static_cast<double>(n);

    PolicyBatch pb = policy_sample_batch(actor_, batch.obs, rng_);
    const Eigen::MatrixXd x = stack_obs_action(batch.obs, pb.action);

    Mlp::Workspace wr1, wr2;
    const Eigen::VectorXd qr1 = qr1_.forward_cached(x, wr1).row(0).transpose();
    const Eigen::VectorXd qr2 = qr2_.forward_cached(x, wr2).row(0).transpose();
    const Eigen::VectorXd qr = qr1.cwiseMin(qr2);

    const bool uses_cost = cfg_.algorithm != Algorithm::sac_penalty;
    Mlp::Workspace wc1, wc2;
    Eigen::VectorXd qc1, qc2, qc;
    if (uses_cost) {
        qc1 = qc1_.forward_cached(x, wc1).row(0).transpose();
        qc2 = qc2_.forward_cached(x, wc2).row(0).transpose();
        qc = qc1.cwiseMax(qc2);
    }

    const double beta_coef = beta();
    double loss = 0.0;
    Eigen::VectorXd cost_weight = Eigen::VectorXd::Zero(n);  // d loss_i / d qc_i
    double active = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        switch (cfg_.algorithm) {
            case Algorithm::sac_penalty:
                loss += a_coef * pb.logp(i) - qr(i);
                break;
            case Algorithm::sac_lag:
                loss += sac_lag_actor_term(qr(i), qc(i), beta_coef, a_coef, pb.logp(i));
                cost_weight(i) = beta_coef;
                break;
            case Algorithm::csac_lb: {
                const ValueGrad vg = psi_star(qc(i), cfg_.barrier_mu, cfg_.cost_limit_d);
                loss += a_coef * pb.logp(i) - qr(i) + vg.value;
                cost_weight(i) = vg.d;
                if (qc(i) > cfg_.cost_limit_d) active += 1.0;
                break;
            }
        }
    }
    loss *= inv_n;
    if (!std::isfinite(loss)) {
        throw TrainingDivergenceError("actor loss is not finite");
    }

    // dL/da through the selected critics. Reward: argmin twin; cost: argmax.
    Eigen::VectorXd d_action = Eigen::VectorXd::Zero(n);
    {
        Eigen::MatrixXd up1(1, n), up2(1, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const bool first = qr1(i) <= qr2(i);
            up1(0, i) = first ? -inv_n : 0.0;
            up2(0, i) = first ? 0.0 : -inv_n;
        }
        Eigen::MatrixXd dx;
        qr1_.backward(wr1, up1, false, &dx);
        d_action += dx.row(kObsDim).transpose();
        qr2_.backward(wr2, up2, false, &dx);
        d_action += dx.row(kObsDim).transpose();
    }
    if (uses_cost && (cost_weight.array() != 0.0).any()) {
        Eigen::MatrixXd up1(1, n), up2(1, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const bool first = qc1(i) >= qc2(i);
            const double w = cost_weight(i) * inv_n;
            up1(0, i) = first ? w : 0.0;
            up2(0, i) = first ? 0.0 : w;
        }
        Eigen::MatrixXd dx;
        qc1_.backward(wc1, up1, false, &dx);
        d_action += dx.row(kObsDim).transpose();
        qc2_.backward(wc2, up2, false, &dx);
        d_action += dx.row(kObsDim).transpose();
    }

    // Chain into the actor outputs (mean and raw log-std).
    Eigen::MatrixXd dy(2, n);
    const double g_logp = a_coef * inv_n;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double a = pb.action(i);
        const double dlogp_dz = 2.0 * a;  // d(-log(1-tanh^2 z))/dz
        const double da_dz = 1.0 - a * a;
        const double sz = std::exp(pb.logstd(i)) * pb.eps(i);
        dy(0, i) = g_logp * dlogp_dz + d_action(i) * da_dz;
        const bool clamped = pb.logstd_raw(i) <= kLogStdMin || pb.logstd_raw(i) >= kLogStdMax;
        dy(1, i) = clamped ? 0.0
                           : g_logp * (-1.0 + dlogp_dz * sz) + d_action(i) * da_dz * sz;
    }
    actor_.zero_grads();
    actor_.backward(pb.ws, dy, true, nullptr);
    opt_actor_.step(actor_);

    if (cfg_.auto_alpha) {
        const double grad = -(pb.logp.array() + cfg_.target_entropy).mean();
        log_alpha_ = opt_alpha_.scalar_step(log_alpha_, grad);
    }

    ActorUpdateResult result;
    result.actor_loss = loss;
    result.alpha = alpha();
    result.mean_qc = uses_cost ? qc.mean() : 0.0;
    result.barrier_active_frac = active * inv_n;
    if (cfg_.algorithm == Algorithm::sac_lag) {
        result.beta = beta_update_from_qc(std::span<const double>(qc.data(),
                                                                  static_cast<std::size_t>(n)));
    } else {
        result.beta = beta_coef;
    }
    last_actor_result_ = result;
    return result;
}

void Trainer::update(const ReplayBuffer& buffer) {
    buffer.sample_indices(static_cast<std::size_t>(cfg_.batch_size), rng_, index_scratch_);
    const Batch batch = make_batch(buffer, index_scratch_);
    critic_update(batch);
    actor_update(batch);
}

KpiReport evaluate_policy(const Mlp& actor, SimEnv& env, std::uint64_t eval_seed,
                          std::vector<Transition>* episode_out) {
    Observation obs = env.reset(ResetMode::eval, eval_seed);
    std::vector<Transition> episode;
    episode.reserve(static_cast<std::size_t>(env.episode_len()));
    while (true) {
        const double action = policy_mean_action(actor, normalize_obs(obs));
        Transition tr = env.step(action);
        obs = tr.obs;
        episode.push_back(std::move(tr));
        if (episode.back().done) break;
    }
    const KpiReport report = compute_kpis(episode, env.config().t_ref, env.config().step_s);
    if (episode_out != nullptr) {
        *episode_out = std::move(episode);
    }
    return report;
}

KpiReport Trainer::evaluate(SimEnv& env, std::vector<Transition>* episode_out) const {
    return evaluate_policy(actor_, env, CounterRng::derive(cfg_.seed, 0xe7a1), episode_out);
}

void Trainer::snapshot_params() {
    const Mlp* nets[] = {&actor_, &qr1_, &qr2_, &qc1_, &qc2_, &qr1t_, &qr2t_, &qc1t_, &qc2t_};
    std::size_t total = 2;  // log_alpha, beta_raw
    for (const Mlp* net : nets) total += net->param_count();
    last_good_params_.resize(total);
    std::size_t off = 0;
    last_good_params_[off++] = log_alpha_;
    last_good_params_[off++] = beta_raw_;
    for (const Mlp* net : nets) {
        net->get_params(std::span<double>(last_good_params_.data() + off, net->param_count()));
        off += net->param_count();
    }
}

void Trainer::write_divergence_dump(const std::string& out_dir, const std::string& what,
                                    int episode, long total_steps) const {
    if (out_dir.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    std::ofstream dump(out_dir + "/divergence.txt");
    dump << "error: " << what << "\n"
         << "episode: " << episode << "\n"
         << "env_steps: " << total_steps << "\n"
         << "alpha: " << alpha() << "\n"
         << "beta: " << beta() << "\n";
    // Retain the last evaluation-time parameters for post-mortem use.
    std::ofstream bin(out_dir + "/last_good_params.bin", std::ios::binary);
    const std::uint64_t count = last_good_params_.size();
    bin.write(reinterpret_cast<const char*>(&count), sizeof(count));
    bin.write(reinterpret_cast<const char*>(last_good_params_.data()),
              static_cast<std::streamsize>(count * sizeof(double)));
}

TrainResult Trainer::train(SimEnv& env, int episodes, const std::string& out_dir) {
    if (episodes < 1) {
        throw ConfigError("train: episodes must be >= 1");
    }
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
    }
    ReplayBuffer buffer(cfg_.buffer_capacity);
    TrainResult result;

    long total_steps = 0;
    int episode = 0;
    Observation obs = env.reset(ResetMode::train, CounterRng::derive(cfg_.seed, 0));

    try {
        while (episode < episodes) {
            double action;
            if (total_steps < cfg_.warmup_steps) {
                action = rng_.uniform(-1.0, 1.0);
            } else {
                action = policy_sample(actor_, normalize_obs(obs), rng_).action;
            }
            const Transition tr = env.step(action);
            ReplayBuffer::Entry entry;
            entry.obs = obs;
            entry.next_obs = tr.obs;
            entry.action = tr.action;
            entry.reward = tr.reward;  // shaping happens at batch assembly
            entry.cost = tr.cost;
            entry.done = tr.done;
            buffer.push(entry);
            obs = tr.obs;
            total_steps += 1;

            if (total_steps > cfg_.warmup_steps &&
                (total_steps - cfg_.warmup_steps) % cfg_.update_every == 0) {
                update(buffer);
            }

            if (tr.done) {
                episode += 1;
                if (episode % cfg_.eval_every_episodes == 0 || episode == episodes) {
                    std::vector<Transition> eval_episode;
                    const KpiReport kpis = evaluate(env, &eval_episode);
                    MetricsRow row;
                    row.episode = episode;
                    row.energy_kwh = kpis.energy_kwh;
                    row.avg_dev_k = kpis.avg_dev_k;
                    row.max_dev_k = kpis.max_dev_k;
                    row.beta_or_barrier = cfg_.algorithm == Algorithm::sac_lag
                                              ? beta()
                                              : last_actor_result_.barrier_active_frac;
                    result.metrics.push_back(row);
                    snapshot_params();
                    if (episode == episodes) {
                        result.final_kpis = kpis;
                        result.final_eval_episode = std::move(eval_episode);
                    }
                }
                if (episode < episodes) {
                    obs = env.reset(ResetMode::train,
                                    CounterRng::derive(cfg_.seed, static_cast<std::uint64_t>(episode)));
                }
            }
        }
    } catch (const TrainingDivergenceError& e) {
        write_divergence_dump(out_dir, e.what(), episode, total_steps);
        throw;
    } catch (const SimulationBlowupError& e) {
        write_divergence_dump(out_dir, e.what(), episode, total_steps);
        throw;
    }

    if (!out_dir.empty()) {
        write_metrics_csv(result.metrics, out_dir + "/metrics.csv");
        save_checkpoint(out_dir + "/checkpoint.bin", out_dir + "/checkpoint.json");
        log_episode(result.final_eval_episode, out_dir + "/eval_episode.csv");
        write_kpis_json(result.final_kpis, out_dir + "/kpis.json");
    }
    return result;
}

void write_metrics_csv(const std::vector<MetricsRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write metrics CSV: " + path);
    }
    out << "episode,energy_kwh,avg_dev_k,max_dev_k,beta_or_barrier\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g\n", r.episode, r.energy_kwh,
                      r.avg_dev_k, r.max_dev_k, r.beta_or_barrier);
        out << buf;
    }
}

std::vector<MetricsRow> read_metrics_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("metrics CSV not found: " + path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw ConfigError("metrics CSV is empty: " + path);
    }
    std::vector<MetricsRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        MetricsRow r;
        if (std::sscanf(line.c_str(), "%d,%lf,%lf,%lf,%lf", &r.episode, &r.energy_kwh,
                        &r.avg_dev_k, &r.max_dev_k, &r.beta_or_barrier) != 5) {
            throw ConfigError("malformed metrics row at line " + std::to_string(lineno) + " in " +
                              path);
        }
        rows.push_back(r);
    }
    return rows;
}

namespace {

void write_net(std::ofstream& out, const Mlp& net) {
    const std::uint64_t count = net.param_count();
    out.write(reinterpret_cast<const char*>(&count), sizeof(count));
    std::vector<double> params(count);
    net.get_params(params);
    out.write(reinterpret_cast<const char*>(params.data()),
              static_cast<std::streamsize>(count * sizeof(double)));
}

void read_net(std::ifstream& in, Mlp& net) {
    std::uint64_t count = 0;
    in.read(reinterpret_cast<char*>(&count), sizeof(count));
    if (!in || count != net.param_count()) {
        throw ConfigError("checkpoint parameter count mismatch");
    }
    std::vector<double> params(count);
    in.read(reinterpret_cast<char*>(params.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (!in) {
        throw ConfigError("checkpoint truncated while reading parameters");
    }
    net.set_params(params);
}

}  // namespace

void Trainer::save_checkpoint(const std::string& bin_path, const std::string& json_path) const {
    std::ofstream out(bin_path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write checkpoint: " + bin_path);
    }
    out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
    out.write(reinterpret_cast<const char*>(&kCheckpointVersion), sizeof(kCheckpointVersion));
    const Mlp* nets[] = {&actor_, &qr1_, &qr2_, &qc1_, &qc2_, &qr1t_, &qr2t_, &qc1t_, &qc2t_};
    const std::uint32_t net_count = 9;
    out.write(reinterpret_cast<const char*>(&net_count), sizeof(net_count));
    for (const Mlp* net : nets) write_net(out, *net);
    out.write(reinterpret_cast<const char*>(&log_alpha_), sizeof(log_alpha_));
    out.write(reinterpret_cast<const char*>(&beta_raw_), sizeof(beta_raw_));
    if (!out) {
        throw ConfigError("checkpoint write failed: " + bin_path);
    }

    nlohmann::json j;
    j["version"] = kCheckpointVersion;
    j["algorithm"] = to_string(cfg_.algorithm);
    j["penalty"] = cfg_.penalty;
    j["batch_size"] = cfg_.batch_size;
    j["hidden"] = cfg_.hidden;
    j["gamma"] = cfg_.gamma;
    j["lr"] = cfg_.lr;
    j["tau"] = cfg_.tau;
    j["warmup_steps"] = cfg_.warmup_steps;
    j["update_every"] = cfg_.update_every;
    j["buffer_capacity"] = cfg_.buffer_capacity;
    j["cost_limit_d"] = cfg_.cost_limit_d;
    j["barrier_mu"] = cfg_.barrier_mu;
    j["auto_alpha"] = cfg_.auto_alpha;
    j["alpha_init"] = cfg_.alpha_init;
    j["target_entropy"] = cfg_.target_entropy;
    j["beta_raw_init"] = cfg_.beta_raw_init;
    j["eval_every_episodes"] = cfg_.eval_every_episodes;
    j["seed"] = cfg_.seed;
    j["rng_key"] = rng_.key();
    j["rng_counter"] = rng_.counter();
    std::ofstream js(json_path);
    if (!js) {
        throw ConfigError("cannot write checkpoint sidecar: " + json_path);
    }
    js << j.dump(2) << "\n";
}

Trainer Trainer::load_checkpoint(const std::string& bin_path, const std::string& json_path) {
    std::ifstream js(json_path);
    if (!js) {
        throw ConfigError("checkpoint sidecar not found: " + json_path);
    }
    nlohmann::json j;
    try {
        js >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(json_path + ": JSON parse error: " + e.what());
    }
    TrainerConfig cfg;
    cfg.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
    cfg.penalty = j.at("penalty").get<double>();
    cfg.batch_size = j.at("batch_size").get<int>();
    cfg.hidden = j.at("hidden").get<std::vector<int>>();
    cfg.gamma = j.at("gamma").get<double>();
    cfg.lr = j.at("lr").get<double>();
    cfg.tau = j.at("tau").get<double>();
    cfg.warmup_steps = j.at("warmup_steps").get<int>();
    cfg.update_every = j.at("update_every").get<int>();
    cfg.buffer_capacity = j.at("buffer_capacity").get<std::size_t>();
    cfg.cost_limit_d = j.at("cost_limit_d").get<double>();
    cfg.barrier_mu = j.at("barrier_mu").get<double>();
    cfg.auto_alpha = j.at("auto_alpha").get<bool>();
    cfg.alpha_init = j.at("alpha_init").get<double>();
    cfg.target_entropy = j.at("target_entropy").get<double>();
    cfg.beta_raw_init = j.at("beta_raw_init").get<double>();
    cfg.eval_every_episodes = j.at("eval_every_episodes").get<int>();
    cfg.seed = j.at("seed").get<std::uint64_t>();

    Trainer t(cfg);
    std::ifstream in(bin_path, std::ios::binary);
    if (!in) {
        throw ConfigError("checkpoint not found: " + bin_path);
    }
    char magic[4];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0) {
        throw ConfigError("bad checkpoint magic in " + bin_path);
    }
    std::uint32_t version = 0;
    in.read(reinterpret_cast<char*>(&version), sizeof(version));
    if (version != kCheckpointVersion) {
        throw ConfigError("unsupported checkpoint version in " + bin_path);
    }
    std::uint32_t net_count = 0;
    in.read(reinterpret_cast<char*>(&net_count), sizeof(net_count));
    if (net_count != 9) {
        throw ConfigError("unexpected network count in " + bin_path);
    }
    Mlp* nets[] = {&t.actor_, &t.qr1_, &t.qr2_, &t.qc1_, &t.qc2_,
                   &t.qr1t_, &t.qr2t_, &t.qc1t_, &t.qc2t_};
    for (Mlp* net : nets) read_net(in, *net);
    in.read(reinterpret_cast<char*>(&t.log_alpha_), sizeof(t.log_alpha_));
    in.read(reinterpret_cast<char*>(&t.beta_raw_), sizeof(t.beta_raw_));
    if (!in) {
        throw ConfigError("checkpoint truncated: " + bin_path);
    }
    t.rng_.restore(j.at("rng_key").get<std::uint64_t>(), j.at("rng_counter").get<std::uint64_t>());
    t.snapshot_params();
    return t;
}

}  // namespace heatctrl
