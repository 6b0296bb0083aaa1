#ifndef TSAD_NEURAL_HPP
#define TSAD_NEURAL_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tsad/rng.hpp"

namespace tsad {

/// Numerically stable logistic function; no overflow for any finite input.
double sigmoid(double x);

double tanh_act(double x);

struct LossGrad {
  double loss = 0.0;
  double grad = 0.0;
};

/// Half squared error: loss = 0.5*(prediction-target)^2, grad = prediction-target.
LossGrad mse_final_step(double prediction, double target);

/// Cross entropy with the probability clamped into [1e-12, 1-1e-12].
/// The gradient is taken with respect to the clamped probability.
LossGrad binary_cross_entropy(double prob, int label);

/// Named dense parameter matrix (vectors are n-by-1).
struct ParamBlock {
  std::string name;
  Eigen::MatrixXd values;
};

/// Non-owning handle used to walk a model's parameters in a fixed order.
struct ParamView {
  std::string name;
  Eigen::MatrixXd* values = nullptr;
};

struct AdagradState {
  double learning_rate = 0.05;
  double epsilon = 1e-8;
  std::vector<Eigen::MatrixXd> accumulators;  // sized lazily, one per block
};

/// acc += g^2, param -= lr * g / (sqrt(acc) + eps), elementwise per block.
void adagrad_step(const std::vector<ParamView>& params, const std::vector<ParamView>& grads,
                  AdagradState& state);

/// Inverted dropout mask: entries are 0 with probability rate, else 1/(1-rate).
Eigen::VectorXd dropout_mask(Eigen::Index length, double rate, Rng& rng);
Eigen::VectorXd dropout_mask(Eigen::Index length, double rate, std::uint64_t seed);

/// Weights drawn uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)).
ParamBlock init_params(const std::string& name, Eigen::Index rows, Eigen::Index cols,
                       Eigen::Index fan_in, Rng& rng);
ParamBlock init_params(const std::string& name, Eigen::Index rows, Eigen::Index cols,
                       Eigen::Index fan_in, std::uint64_t seed);

/// Central-difference check of analytic gradients. Perturbs each scalar
/// parameter in place (restoring it), evaluates loss_fn, and returns the
/// maximum relative error  |g_a - g_n| / max(|g_a|, |g_n|, 1e-8).
/// loss_fn must be deterministic (dropout disabled).
double finite_diff_grad_check(const std::function<double()>& loss_fn,
                              const std::vector<ParamView>& params,
                              const std::vector<ParamView>& analytic_grads,
                              double epsilon = 1e-5);

/// Shared hyperparameter bundle for the gradient-trained models.
struct TrainConfig {
  Eigen::Index hidden = 32;
  double learning_rate = 0.05;
  int epochs = 1000;
  double dropout = 0.0;
  double l2 = 0.0;
  std::uint64_t seed = 0;
};

struct EpochLoss {
  double train = 0.0;
  double valid = 0.0;
};

}  // namespace tsad

#endif  // TSAD_NEURAL_HPP
