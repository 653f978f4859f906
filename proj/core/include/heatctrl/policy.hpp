#pragma once

#include <array>

#include <Eigen/Core>

#include "heatctrl/mlp.hpp"
#include "heatctrl/rng.hpp"
#include "heatctrl/sim_env.hpp"

namespace heatctrl {

inline constexpr double kLogStdMin = -20.0;
inline constexpr double kLogStdMax = 2.0;

// Fixed affine observation scaling (temperatures centered at 20 degC with a
// 20 K span, gains in units of 5 kW). Constant by design so the input
// distribution to the networks never drifts during training.
std::array<double, kObsDim> normalize_obs(const Observation& obs);

// One reparameterized draw from the tanh-squashed Gaussian policy. The
// actor's two outputs are the Gaussian mean and a log-std clamped into
// [kLogStdMin, kLogStdMax]; logp includes the tanh change-of-variables term
// in a form that stays finite as |action| approaches 1.
struct PolicySample {
    double action = 0.0;
    double logp = 0.0;
    double mean = 0.0;  // pre-squash mean
    double z = 0.0;     // pre-squash sample
};

// Throws TrainingDivergenceError when the network emits non-finite outputs.
PolicySample policy_sample(const Mlp& actor, const std::array<double, kObsDim>& obs_norm,
                           CounterRng& rng);

// Deterministic mode: tanh(mean).
double policy_mean_action(const Mlp& actor, const std::array<double, kObsDim>& obs_norm);

// Batched draw used by the trainers; obs_norm is (obs_dim, batch).
struct PolicyBatch {
    Eigen::VectorXd mean;
    Eigen::VectorXd logstd_raw;  // network output before clamping
    Eigen::VectorXd logstd;      // clamped
    Eigen::VectorXd eps;         // standard normal draws
    Eigen::VectorXd z;           // mean + exp(logstd) * eps
    Eigen::VectorXd action;      // tanh(z)
    Eigen::VectorXd logp;
    Mlp::Workspace ws;           // actor forward cache for backprop
};
PolicyBatch policy_sample_batch(const Mlp& actor, const Eigen::MatrixXd& obs_norm,
                                CounterRng& rng);

// log(1 - tanh(z)^2) in overflow-safe form.
double log_one_minus_tanh_sq(double z);

}  // namespace heatctrl
