#include "heatctrl/policy.hpp"

#include <algorithm>
#include <cmath>

#include "heatctrl/barrier_math.hpp"
#include "heatctrl/errors.hpp"

namespace heatctrl {

namespace {
constexpr double kLog2 = 0.6931471805599453094172321;
constexpr double kHalfLog2Pi = 0.9189385332046727417803297;
}  // namespace

std::array<double, kObsDim> normalize_obs(const Observation& obs) {
    return {(obs[0] - 20.0) / 20.0, (obs[1] - 20.0) / 20.0, (obs[2] - 20.0) / 20.0,
            (obs[3] - 20.0) / 20.0, obs[4] / 5.0};
}

double log_one_minus_tanh_sq(double z) {
    // log(1 - tanh(z)^2) = 2 (log 2 - z - softplus(-2z))
    return 2.0 * (kLog2 - z - softplus(-2.0 * z));
}

PolicySample policy_sample(const Mlp& actor, const std::array<double, kObsDim>& obs_norm,
                           CounterRng& rng) {
    Eigen::MatrixXd x(kObsDim, 1);
    for (int i = 0; i < kObsDim; ++i) x(i, 0) = obs_norm[i];
    const Eigen::MatrixXd y = actor.forward(x);
    const double mean = y(0, 0);
    const double logstd = std::clamp(y(1, 0), kLogStdMin, kLogStdMax);
    if (!std::isfinite(mean) || !std::isfinite(logstd)) {
        throw TrainingDivergenceError("policy network produced non-finite output");
    }
    const double eps = rng.normal();
    const double z = mean + std::exp(logstd) * eps;
    PolicySample s;
    s.mean = mean;
    s.z = z;
    s.action = std::tanh(z);
    s.logp = -0.5 * eps * eps - logstd - kHalfLog2Pi - log_one_minus_tanh_sq(z);
    return s;
}

double policy_mean_action(const Mlp& actor, const std::array<double, kObsDim>& obs_norm) {
    Eigen::MatrixXd x(kObsDim, 1);
    for (int i = 0; i < kObsDim; ++i) x(i, 0) = obs_norm[i];
    const Eigen::MatrixXd y = actor.forward(x);
    if (!std::isfinite(y(0, 0))) {
        throw TrainingDivergenceError("policy network produced non-finite output");
    }
    return std::tanh(y(0, 0));
}

PolicyBatch policy_sample_batch(const Mlp& actor, const Eigen::MatrixXd& obs_norm,
                                CounterRng& rng) {
    PolicyBatch b;
    const Eigen::MatrixXd& y = actor.forward_cached(obs_norm, b.ws);
    const Eigen::Index n = y.cols();
    b.mean = y.row(0).transpose();
    b.logstd_raw = y.row(1).transpose();
    b.logstd = b.logstd_raw.cwiseMax(kLogStdMin).cwiseMin(kLogStdMax);
    if (!b.mean.allFinite() || !b.logstd.allFinite()) {
        throw TrainingDivergenceError("policy network produced non-finite outputs in batch");
    }
    b.eps.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) b.eps(i) = rng.normal();
    b.z = b.mean.array() + b.logstd.array().exp() * b.eps.array();
    b.action = b.z.array().tanh();
    b.logp.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        b.logp(i) = -0.5 * b.eps(i) * b.eps(i) - b.logstd(i) - kHalfLog2Pi -
                    log_one_minus_tanh_sq(b.z(i));
    }
    return b;
}

}  // namespace heatctrl
