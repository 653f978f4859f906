#include "heatctrl/barrier_math.hpp"

#include <cmath>
#include <stdexcept>

namespace heatctrl {

ValueGrad psi_tilde(double x, double mu) {
    if (!(mu > 0.0)) {
        throw std::invalid_argument("psi_tilde: mu must be positive");
    }
    ValueGrad out;
    if (x <= -1.0 / (mu * mu)) {
        out.value = -std::log(-x) / mu;
        out.d = -1.0 / (mu * x);
    } else {
        out.value = mu * x - std::log(1.0 / (mu * mu)) / mu + 1.0 / mu;
        out.d = mu;
    }
    return out;
}

ValueGrad psi_star(double x, double mu, double d) {
    if (!(mu > 1.0)) {
        throw std::invalid_argument("psi_star: mu must exceed 1");
    }
    if (x <= d) {
        // relu collapses the input to -1, where the barrier is identically 0.
        return {0.0, 0.0};
    }
    ValueGrad inner = psi_tilde(x - d - 1.0, mu);
    return {inner.value, inner.d};
}

BetaLoss beta_loss(double beta, double d, std::span<const double> qc_batch) {
    if (qc_batch.empty()) {
        throw std::invalid_argument("beta_loss: empty batch");
    }
    double mean_gap = 0.0;
    for (double qc : qc_batch) {
        mean_gap += d - qc;
    }
    mean_gap /= static_cast<double>(qc_batch.size());
    return {beta * mean_gap, mean_gap};
}

double sac_lag_actor_term(double qr, double qc, double beta, double alpha, double logp) {
    return alpha * logp - qr + beta * qc;
}

double csac_lb_actor_term(double qr, double qc, double alpha, double logp, double mu, double d) {
    return alpha * logp - qr + psi_star(qc, mu, d).value;
}

}  // namespace heatctrl
