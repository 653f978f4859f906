#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "heatctrl/rng.hpp"

namespace heatctrl {

// Dense feed-forward network, ReLU hidden layers and a linear output, with
// parameter and gradient buffers of identical shapes. Batches are stored
// column-wise: X is (in_dim, batch).
class Mlp {
public:
    Mlp() = default;
    explicit Mlp(std::vector<int> sizes);

    // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights and biases.
    void init_random(CounterRng& rng);
    void zero_init();

    struct Workspace {
        std::vector<Eigen::MatrixXd> act;  // act[0] = input, act.back() = output
        std::vector<Eigen::MatrixXd> pre;  // pre-activations per layer
    };

    Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;
    const Eigen::MatrixXd& forward_cached(const Eigen::MatrixXd& x, Workspace& ws) const;

    // Backpropagates an upstream gradient dL/dY (out_dim, batch) through the
    // cached pass. Accumulates into the gradient buffers unless disabled, and
    // writes dL/dX when dx is non-null.
    void backward(const Workspace& ws, const Eigen::MatrixXd& dy, bool accumulate_param_grads,
                  Eigen::MatrixXd* dx = nullptr);

    void zero_grads();

    int in_dim() const { return sizes_.front(); }
    int out_dim() const { return sizes_.back(); }
    const std::vector<int>& sizes() const { return sizes_; }
    std::size_t layer_count() const { return weights_.size(); }

    std::vector<Eigen::MatrixXd>& weights() { return weights_; }
    std::vector<Eigen::VectorXd>& biases() { return biases_; }
    std::vector<Eigen::MatrixXd>& weight_grads() { return grad_weights_; }
    std::vector<Eigen::VectorXd>& bias_grads() { return grad_biases_; }
    const std::vector<Eigen::MatrixXd>& weights() const { return weights_; }
    const std::vector<Eigen::VectorXd>& biases() const { return biases_; }
    const std::vector<Eigen::MatrixXd>& weight_grads() const { return grad_weights_; }
    const std::vector<Eigen::VectorXd>& bias_grads() const { return grad_biases_; }

    // Flat parameter views in a fixed order (W0, b0, W1, b1, ...).
    std::size_t param_count() const;
    void get_params(std::span<double> out) const;
    void set_params(std::span<const double> in);
    void get_grads(std::span<double> out) const;

private:
    std::vector<int> sizes_;
    std::vector<Eigen::MatrixXd> weights_;
    std::vector<Eigen::VectorXd> biases_;
    std::vector<Eigen::MatrixXd> grad_weights_;
    std::vector<Eigen::VectorXd> grad_biases_;
};

// Adaptive-moment gradient step over an Mlp's parameter/gradient buffers.
class Adam {
public:
    Adam() = default;
    Adam(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

    void attach(const Mlp& net);  // sizes moment buffers
    void step(Mlp& net);          // applies net's gradient buffers

    // Scalar-parameter variant (entropy coefficient, multiplier).
    double scalar_step(double param, double grad);

    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

private:
    long t_ = 0;
    std::vector<Eigen::MatrixXd> m_w_, v_w_;
    std::vector<Eigen::VectorXd> m_b_, v_b_;
    long scalar_t_ = 0;
    double scalar_m_ = 0.0;
    double scalar_v_ = 0.0;
};

// Exponential moving average of online parameters into a target network.
void polyak_update(Mlp& target, const Mlp& online, double tau);

}  // namespace heatctrl
