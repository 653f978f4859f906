#include "heatctrl/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace heatctrl {

Mlp::Mlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.size() < 2) {
        throw std::invalid_argument("Mlp: need at least input and output sizes");
    }
    for (int s : sizes_) {
        if (s < 1) throw std::invalid_argument("Mlp: layer sizes must be >= 1");
    }
    const std::size_t layers = sizes_.size() - 1;
    weights_.resize(layers);
    biases_.resize(layers);
    grad_weights_.resize(layers);
    grad_biases_.resize(layers);
    for (std::size_t l = 0; l < layers; ++l) {
        weights_[l].setZero(sizes_[l + 1], sizes_[l]);
        biases_[l].setZero(sizes_[l + 1]);
        grad_weights_[l].setZero(sizes_[l + 1], sizes_[l]);
        grad_biases_[l].setZero(sizes_[l + 1]);
    }
}

void Mlp::init_random(CounterRng& rng) {
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(sizes_[l]));
        for (Eigen::Index j = 0; j < weights_[l].cols(); ++j) {
            for (Eigen::Index i = 0; i < weights_[l].rows(); ++i) {
                weights_[l](i, j) = rng.uniform(-bound, bound);
            }
        }
        for (Eigen::Index i = 0; i < biases_[l].size(); ++i) {
            biases_[l](i) = rng.uniform(-bound, bound);
        }
    }
}

void Mlp::zero_init() {
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        weights_[l].setZero();
        biases_[l].setZero();
    }
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x) const {
    Workspace ws;
    return forward_cached(x, ws);
}

const Eigen::MatrixXd& Mlp::forward_cached(const Eigen::MatrixXd& x, Workspace& ws) const {
    if (x.rows() != in_dim()) {
        throw std::invalid_argument("Mlp::forward: input dimension mismatch");
    }
    const std::size_t layers = weights_.size();
    ws.act.resize(layers + 1);
    ws.pre.resize(layers);
    ws.act[0] = x;
    for (std::size_t l = 0; l < layers; ++l) {
        ws.pre[l].noalias() = weights_[l] * ws.act[l];
        ws.pre[l].colwise() += biases_[l];
        if (l + 1 < layers) {
            ws.act[l + 1] = ws.pre[l].cwiseMax(0.0);  // ReLU
        } else {
            ws.act[l + 1] = ws.pre[l];  // linear output
        }
    }
    return ws.act.back();
}

void Mlp::backward(const Workspace& ws, const Eigen::MatrixXd& dy, bool accumulate_param_grads,
                   Eigen::MatrixXd* dx) {
    const std::size_t layers = weights_.size();
    if (ws.act.size() != layers + 1) {
        throw std::invalid_argument("Mlp::backward: workspace does not match this network");
    }
    Eigen::MatrixXd delta = dy;
    for (std::size_t l = layers; l-- > 0;) {
        if (l + 1 < layers) {
            // ReLU mask of the layer whose output feeds layer l+1.
            delta.array() *= (ws.pre[l].array() > 0.0).cast<double>();
        }
        if (accumulate_param_grads) {
            grad_weights_[l].noalias() += delta * ws.act[l].transpose();
            grad_biases_[l].noalias() += delta.rowwise().sum();
        }
        if (l > 0 || dx != nullptr) {
            Eigen::MatrixXd prev = weights_[l].transpose() * delta;
            if (l == 0) {
                *dx = std::move(prev);
            } else {
                delta = std::move(prev);
            }
        }
    }
}

void Mlp::zero_grads() {
    for (std::size_t l = 0; l < grad_weights_.size(); ++l) {
        grad_weights_[l].setZero();
        grad_biases_[l].setZero();
    }
}

std::size_t Mlp::param_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        n += static_cast<std::size_t>(weights_[l].size()) +
             static_cast<std::size_t>(biases_[l].size());
    }
    return n;
}

void Mlp::get_params(std::span<double> out) const {
    std::size_t k = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        for (Eigen::Index i = 0; i < weights_[l].size(); ++i) out[k++] = weights_[l].data()[i];
        for (Eigen::Index i = 0; i < biases_[l].size(); ++i) out[k++] = biases_[l].data()[i];
    }
}

void Mlp::set_params(std::span<const double> in) {
    std::size_t k = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        for (Eigen::Index i = 0; i < weights_[l].size(); ++i) weights_[l].data()[i] = in[k++];
        for (Eigen::Index i = 0; i < biases_[l].size(); ++i) biases_[l].data()[i] = in[k++];
    }
}

void Mlp::get_grads(std::span<double> out) const {
    std::size_t k = 0;
    for (std::size_t l = 0; l < grad_weights_.size(); ++l) {
        for (Eigen::Index i = 0; i < grad_weights_[l].size(); ++i)
            out[k++] = grad_weights_[l].data()[i];
        for (Eigen::Index i = 0; i < grad_biases_[l].size(); ++i)
            out[k++] = grad_biases_[l].data()[i];
    }
}

Adam::Adam(double lr_, double beta1_, double beta2_, double eps_) {
    lr = lr_;
    beta1 = beta1_;
    beta2 = beta2_;
    eps = eps_;
}

void Adam::attach(const Mlp& net) {
    const auto& w = net.weights();
    const auto& b = net.biases();
    m_w_.resize(w.size());
    v_w_.resize(w.size());
    m_b_.resize(b.size());
    v_b_.resize(b.size());
    for (std::size_t l = 0; l < w.size(); ++l) {
        m_w_[l].setZero(w[l].rows(), w[l].cols());
        v_w_[l].setZero(w[l].rows(), w[l].cols());
        m_b_[l].setZero(b[l].size());
        v_b_[l].setZero(b[l].size());
    }
    t_ = 0;
}

void Adam::step(Mlp& net) {
    t_ += 1;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t_));
    auto& w = net.weights();
    auto& b = net.biases();
    const auto& gw = net.weight_grads();
    const auto& gb = net.bias_grads();
    for (std::size_t l = 0; l < w.size(); ++l) {
        m_w_[l] = beta1 * m_w_[l] + (1.0 - beta1) * gw[l];
        v_w_[l].array() = beta2 * v_w_[l].array() + (1.0 - beta2) * gw[l].array().square();
        w[l].array() -=
            lr * (m_w_[l].array() / bc1) / ((v_w_[l].array() / bc2).sqrt() + eps);
        m_b_[l] = beta1 * m_b_[l] + (1.0 - beta1) * gb[l];
        v_b_[l].array() = beta2 * v_b_[l].array() + (1.0 - beta2) * gb[l].array().square();
        b[l].array() -=
            lr * (m_b_[l].array() / bc1) / ((v_b_[l].array() / bc2).sqrt() + eps);
    }
}

double Adam::scalar_step(double param, double grad) {
    scalar_t_ += 1;
    scalar_m_ = beta1 * scalar_m_ + (1.0 - beta1) * grad;
    scalar_v_ = beta2 * scalar_v_ + (1.0 - beta2) * grad * grad;
    const double m_hat = scalar_m_ / (1.0 - std::pow(beta1, static_cast<double>(scalar_t_)));
    const double v_hat = scalar_v_ / (1.0 - std::pow(beta2, static_cast<double>(scalar_t_)));
    return param - lr * m_hat / (std::sqrt(v_hat) + eps);
}

void polyak_update(Mlp& target, const Mlp& online, double tau) {
    auto& tw = target.weights();
    auto& tb = target.biases();
    const auto& ow = online.weights();
    const auto& ob = online.biases();
    for (std::size_t l = 0; l < tw.size(); ++l) {
        tw[l] = (1.0 - tau) * tw[l] + tau * ow[l];
        tb[l] = (1.0 - tau) * tb[l] + tau * ob[l];
    }
}

}  // namespace heatctrl
