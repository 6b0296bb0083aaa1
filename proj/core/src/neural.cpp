#include "tsad/neural.hpp"

#include <algorithm>
#include <cmath>

#include "tsad/error.hpp"

namespace tsad {

double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double tanh_act(double x) { return std::tanh(x); }

LossGrad mse_final_step(double prediction, double target) {
  const double err = prediction - target;
  return {0.5 * err * err, err};
}

LossGrad binary_cross_entropy(double prob, int label) {
  const double p = std::clamp(prob, 1e-12, 1.0 - 1e-12);
  const double y = static_cast<double>(label);
  const double loss = -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
  const double grad = -y / p + (1.0 - y) / (1.0 - p);
  return {loss, grad};
}

void adagrad_step(const std::vector<ParamView>& params, const std::vector<ParamView>& grads,
                  AdagradState& state) {
  if (params.size() != grads.size())
    fail(ErrorCode::ShapeError, "parameter and gradient lists differ in length");
  if (state.accumulators.empty()) {
    state.accumulators.reserve(params.size());
    for (const ParamView& p : params)
      state.accumulators.emplace_back(
          Eigen::MatrixXd::Zero(p.values->rows(), p.values->cols()));
  }
  if (state.accumulators.size() != params.size())
    fail(ErrorCode::ShapeError, "optimizer state does not match parameter list");
  for (std::size_t k = 0; k < params.size(); ++k) {
    Eigen::MatrixXd& p = *params[k].values;
    const Eigen::MatrixXd& g = *grads[k].values;
    Eigen::MatrixXd& acc = state.accumulators[k];
    if (g.rows() != p.rows() || g.cols() != p.cols() || acc.rows() != p.rows() ||
        acc.cols() != p.cols())
      fail(ErrorCode::ShapeError, "gradient shape mismatch for block '" + params[k].name + "'");
    acc.array() += g.array().square();
    p.array() -=
        state.learning_rate * g.array() / (acc.array().sqrt() + state.epsilon);
  }
}

Eigen::VectorXd dropout_mask(Eigen::Index length, double rate, Rng& rng) {
  if (rate < 0.0 || rate >= 1.0)
    fail(ErrorCode::InvalidRate, "dropout rate must be in [0, 1)");
  Eigen::VectorXd mask(length);
  if (rate == 0.0) {
    mask.setOnes();
    return mask;
  }
  const double keep_scale = 1.0 / (1.0 - rate);
  for (Eigen::Index i = 0; i < length; ++i)
    mask[i] = rng.uniform() < rate ? 0.0 : keep_scale;
  return mask;
}

Eigen::VectorXd dropout_mask(Eigen::Index length, double rate, std::uint64_t seed) {
  Rng rng(seed);
  return dropout_mask(length, rate, rng);
}

ParamBlock init_params(const std::string& name, Eigen::Index rows, Eigen::Index cols,
                       Eigen::Index fan_in, Rng& rng) {
  if (fan_in < 1) fail(ErrorCode::InvalidArgument, "fan_in must be >= 1");
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  ParamBlock block{name, Eigen::MatrixXd(rows, cols)};
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) block.values(r, c) = rng.uniform(-bound, bound);
  return block;
}

ParamBlock init_params(const std::string& name, Eigen::Index rows, Eigen::Index cols,
                       Eigen::Index fan_in, std::uint64_t seed) {
  Rng rng(seed);
  return init_params(name, rows, cols, fan_in, rng);
}

double finite_diff_grad_check(const std::function<double()>& loss_fn,
                              const std::vector<ParamView>& params,
                              const std::vector<ParamView>& analytic_grads,
                              double epsilon) {
  if (params.size() != analytic_grads.size())
    fail(ErrorCode::ShapeError, "parameter and gradient lists differ in length");
  double max_rel = 0.0;
  for (std::size_t k = 0; k < params.size(); ++k) {
    Eigen::MatrixXd& p = *params[k].values;
    const Eigen::MatrixXd& g = *analytic_grads[k].values;
    if (g.rows() != p.rows() || g.cols() != p.cols())
      fail(ErrorCode::ShapeError, "gradient shape mismatch for block '" + params[k].name + "'");
    for (Eigen::Index r = 0; r < p.rows(); ++r) {
      for (Eigen::Index c = 0; c < p.cols(); ++c) {
        const double saved = p(r, c);
        p(r, c) = saved + epsilon;
        const double lo_plus = loss_fn();
        p(r, c) = saved - epsilon;
        const double lo_minus = loss_fn();
        p(r, c) = saved;
        const double numeric = (lo_plus - lo_minus) / (2.0 * epsilon);
        const double analytic = g(r, c);
        const double rel = std::abs(analytic - numeric) /
                           std::max({std::abs(analytic), std::abs(numeric), 1e-8});
        max_rel = std::max(max_rel, rel);
      }
    }
  }
  return max_rel;
}

}  // namespace tsad
