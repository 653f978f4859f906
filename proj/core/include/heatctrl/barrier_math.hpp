#pragma once

#include <cmath>
#include <span>

namespace heatctrl {

// Scalar constrained-optimization pieces used by the trainers. All functions
// are pure and return analytic derivatives alongside values.

struct ValueGrad {
    double value = 0.0;
    double d = 0.0;  // derivative w.r.t. x
};

// Linear smoothed log barrier:
//   x <= -1/mu^2 : -(1/mu) ln(-x)
//   otherwise    : mu x - (1/mu) ln(1/mu^2) + 1/mu
// Continuous with continuous derivative at the joint. Requires mu > 0.
ValueGrad psi_tilde(double x, double mu);

// Shifted barrier psi_tilde(relu(x - d) - 1, mu): exactly zero with zero
// derivative on the feasible side x <= d (the subgradient at x = d is taken
// as 0). Requires mu > 1 so that relu(0) - 1 lands on the zero plateau.
ValueGrad psi_star(double x, double mu, double d);

struct BetaLoss {
    double loss = 0.0;
    double d_beta = 0.0;  // derivative w.r.t. beta itself
};

// Multiplier loss E[beta (d - qc)]. The softplus reparameterization that
// keeps beta >= 0 lives in the trainer; chain through it with
// d_loss/d_raw = d_beta * sigmoid(raw).
BetaLoss beta_loss(double beta, double d, std::span<const double> qc_batch);

// Per-sample actor objectives. qr/qc are the reward/cost critic estimates
// the caller selected (min twin for reward, max twin for cost).
double sac_lag_actor_term(double qr, double qc, double beta, double alpha, double logp);
double csac_lb_actor_term(double qr, double qc, double alpha, double logp, double mu, double d);

inline double softplus(double x) {
    // log(1 + e^x) without overflow for large |x|.
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

inline double sigmoid(double x) {
    return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

}  // namespace heatctrl
