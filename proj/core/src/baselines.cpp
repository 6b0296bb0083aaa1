#include "tsad/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "tsad/error.hpp"

namespace tsad {

namespace {

constexpr Eigen::Index kMlpWidths[] = {10, 20, 10, 1};

void check_mlp_shapes(const MlpParams& p) {
  if (p.input_dim < 1 || p.weights.size() != 4 || p.biases.size() != 4)
    fail(ErrorCode::ShapeError, "MLP must have exactly 4 dense layers");
  Eigen::Index in = p.input_dim;
  for (std::size_t l = 0; l < 4; ++l) {
    const Eigen::Index out = kMlpWidths[l];
    if (p.weights[l].rows() != out || p.weights[l].cols() != in ||
        p.biases[l].rows() != out || p.biases[l].cols() != 1)
      fail(ErrorCode::ShapeError, "MLP layer " + std::to_string(l + 1) + " has wrong shape");
    in = out;
  }
}

int required_label(const Window& w) {
  if (!w.label.has_value())
    fail(ErrorCode::InvalidArgument, "classifier training requires labeled windows");
  if (*w.label != 0 && *w.label != 1)
    fail(ErrorCode::InvalidArgument, "window labels must be 0 or 1");
  return *w.label;
}

void require_both_classes(const std::vector<Window>& train) {
  if (train.empty()) fail(ErrorCode::EmptyDataset, "no training windows");
  bool has0 = false;
  bool has1 = false;
  for (const Window& w : train) (required_label(w) == 1 ? has1 : has0) = true;
  if (!has0 || !has1)
    fail(ErrorCode::MissingClass, "classifier training requires both classes");
}

Eigen::VectorXd flattened(const Window& w) {
  return Eigen::Map<const Eigen::VectorXd>(w.points.data(),
                                           static_cast<Eigen::Index>(w.points.size()));
}

}  // namespace

MlpParams MlpParams::init(Eigen::Index input_dim, std::uint64_t seed) {
  if (input_dim < 1) fail(ErrorCode::InvalidArgument, "input_dim must be >= 1");
  MlpParams p;
  p.input_dim = input_dim;
  Rng rng(seed);
  Eigen::Index in = input_dim;
  for (std::size_t l = 0; l < 4; ++l) {
    const Eigen::Index out = kMlpWidths[l];
    p.weights.push_back(init_params("w" + std::to_string(l + 1), out, in, in, rng).values);
    p.biases.emplace_back(Eigen::MatrixXd::Zero(out, 1));
    in = out;
  }
  return p;
}

MlpParams MlpParams::zeros_like(const MlpParams& shape) {
  MlpParams z = shape;
  z.set_zero();
  return z;
}

void MlpParams::set_zero() {
  for (Eigen::MatrixXd& w : weights) w.setZero();
  for (Eigen::MatrixXd& b : biases) b.setZero();
}

std::vector<ParamView> MlpParams::views() {
  std::vector<ParamView> v;
  v.reserve(8);
  for (std::size_t l = 0; l < weights.size(); ++l) {
    v.push_back({"w" + std::to_string(l + 1), &weights[l]});
    v.push_back({"b" + std::to_string(l + 1), &biases[l]});
  }
  return v;
}

double mlp_forward(const Eigen::VectorXd& x, const MlpParams& params, const ForwardMode& mode,
                   MlpCache& cache) {
  check_mlp_shapes(params);
  if (x.size() != params.input_dim)
    fail(ErrorCode::ShapeError, "input size does not match the MLP input layer");

  if (mode.train && mode.dropout > 0.0) {
    if (mode.rng == nullptr)
      fail(ErrorCode::InvalidArgument, "training mode with dropout needs an RNG");
    cache.mask1 = dropout_mask(kMlpWidths[0], mode.dropout, *mode.rng);
    cache.mask2 = dropout_mask(kMlpWidths[1], mode.dropout, *mode.rng);
    cache.mask3 = dropout_mask(kMlpWidths[2], mode.dropout, *mode.rng);
  } else {
    cache.mask1 = Eigen::VectorXd::Ones(kMlpWidths[0]);
    cache.mask2 = Eigen::VectorXd::Ones(kMlpWidths[1]);
    cache.mask3 = Eigen::VectorXd::Ones(kMlpWidths[2]);
  }

  cache.x = x;
  cache.z1.noalias() = params.weights[0] * x;
  cache.z1 += params.biases[0].col(0);
  cache.a1 = cache.z1.array().tanh();
  cache.a1m.array() = cache.mask1.array() * cache.a1.array();

  cache.z2.noalias() = params.weights[1] * cache.a1m;
  cache.z2 += params.biases[1].col(0);
  cache.a2 = cache.z2.array().tanh();
  cache.a2m.array() = cache.mask2.array() * cache.a2.array();

  cache.z3.noalias() = params.weights[2] * cache.a2m;
  cache.z3 += params.biases[2].col(0);
  cache.a3 = cache.z3.array().tanh();
  cache.a3m.array() = cache.mask3.array() * cache.a3.array();

  cache.z4 = (params.weights[3] * cache.a3m)(0, 0) + params.biases[3](0, 0);
  cache.prob = sigmoid(cache.z4);
  return cache.prob;
}

void mlp_backward(const MlpCache& cache, const MlpParams& params, double dloss_dprob,
                  double l2, MlpParams& grads) {
  check_mlp_shapes(params);
  if (cache.x.size() != params.input_dim)
    fail(ErrorCode::CacheMismatch, "cache was built for a different input size");
  if (grads.input_dim != params.input_dim || grads.weights.size() != 4 ||
      grads.biases.size() != 4)
    grads = MlpParams::zeros_like(params);
  else
    grads.set_zero();

  const double dz4 = dloss_dprob * cache.prob * (1.0 - cache.prob);
  grads.weights[3].noalias() += dz4 * cache.a3m.transpose();
  grads.biases[3](0, 0) += dz4;

  Eigen::VectorXd da3 =
      (dz4 * params.weights[3].transpose().col(0).array() * cache.mask3.array()).matrix();
  Eigen::VectorXd dz3 = (da3.array() * (1.0 - cache.a3.array().square())).matrix();
  grads.weights[2].noalias() += dz3 * cache.a2m.transpose();
  grads.biases[2].col(0) += dz3;

  Eigen::VectorXd da2 =
      ((params.weights[2].transpose() * dz3).array() * cache.mask2.array()).matrix();
  Eigen::VectorXd dz2 = (da2.array() * (1.0 - cache.a2.array().square())).matrix();
  grads.weights[1].noalias() += dz2 * cache.a1m.transpose();
  grads.biases[1].col(0) += dz2;

  Eigen::VectorXd da1 =
      ((params.weights[1].transpose() * dz2).array() * cache.mask1.array()).matrix();
  Eigen::VectorXd dz1 = (da1.array() * (1.0 - cache.a1.array().square())).matrix();
  grads.weights[0].noalias() += dz1 * cache.x.transpose();
  grads.biases[0].col(0) += dz1;

  if (l2 != 0.0)
    for (std::size_t l = 0; l < 4; ++l) grads.weights[l] += l2 * params.weights[l];
}

TrainedLstmClassifier train_lstm_classifier(const std::vector<Window>& train,
                                            const std::vector<Window>& valid,
                                            const TrainConfig& config) {
  require_both_classes(train);
  for (const Window& w : train)
    if (w.points.empty()) fail(ErrorCode::InvalidWindow, "training windows must be non-empty");

  StackedLstmParams net = StackedLstmParams::init(1, config.hidden, mix_seed(config.seed, 0));
  Rng train_rng(mix_seed(config.seed, 1));
  AdagradState opt{config.learning_rate, 1e-8, {}};
  StackedLstmGrads grads = StackedLstmParams::zeros_like(net);
  std::vector<ParamView> pviews = net.views();
  std::vector<ParamView> gviews = grads.views();

  const std::vector<Window>& valid_set = valid.empty() ? train : valid;

  TrainedLstmClassifier out;
  out.params.net = net;
  out.history.reserve(static_cast<std::size_t>(std::max(config.epochs, 0)));
  double best_valid = std::numeric_limits<double>::infinity();

  ForwardCache cache;
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    train_rng.shuffle(order);
    double train_sum = 0.0;
    for (std::size_t idx : order) {
      const Window& w = train[idx];
      const ForwardMode mode = ForwardMode::training(config.dropout, train_rng);
      lstm_forward(w.points, static_cast<Eigen::Index>(w.points.size()), net, mode, cache);
      const LossGrad lg =
          binary_cross_entropy(cache.predictions[cache.steps - 1], required_label(w));
      if (!std::isfinite(lg.loss))
        fail(ErrorCode::DivergedTraining,
             "non-finite training loss at epoch " + std::to_string(epoch));
      train_sum += lg.loss;
      lstm_backward(cache, net, lg.grad, config.l2, grads);
      adagrad_step(pviews, gviews, opt);
    }

    double valid_sum = 0.0;
    for (const Window& w : valid_set) {
      lstm_forward(w.points, static_cast<Eigen::Index>(w.points.size()), net,
                   ForwardMode::inference(), cache);
      valid_sum +=
          binary_cross_entropy(cache.predictions[cache.steps - 1], required_label(w)).loss;
    }
    const EpochLoss losses{train_sum / static_cast<double>(order.size()),
                           valid_sum / static_cast<double>(valid_set.size())};
    if (!std::isfinite(losses.valid))
      fail(ErrorCode::DivergedTraining,
           "non-finite validation loss at epoch " + std::to_string(epoch));
    out.history.push_back(losses);
    if (losses.valid < best_valid) {
      best_valid = losses.valid;
      out.params.net = net;
      out.best_epoch = epoch;
    }
  }
  return out;
}

TrainedMlp train_mlp(const std::vector<Window>& train, const std::vector<Window>& valid,
                     const TrainConfig& config) {
  require_both_classes(train);
  const std::size_t input_dim = train.front().points.size();
  for (const Window& w : train)
    if (w.points.size() != input_dim)
      fail(ErrorCode::ShapeError, "MLP training windows must share one length");

  MlpParams params =
      MlpParams::init(static_cast<Eigen::Index>(input_dim), mix_seed(config.seed, 0));
  Rng train_rng(mix_seed(config.seed, 1));
  AdagradState opt{config.learning_rate, 1e-8, {}};
  MlpParams grads = MlpParams::zeros_like(params);
  std::vector<ParamView> pviews = params.views();
  std::vector<ParamView> gviews = grads.views();

  const std::vector<Window>& valid_set = valid.empty() ? train : valid;

  TrainedMlp out;
  out.params = params;
  out.history.reserve(static_cast<std::size_t>(std::max(config.epochs, 0)));
  double best_valid = std::numeric_limits<double>::infinity();

  MlpCache cache;
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    train_rng.shuffle(order);
    double train_sum = 0.0;
    for (std::size_t idx : order) {
      const Window& w = train[idx];
      const ForwardMode mode = ForwardMode::training(config.dropout, train_rng);
      const double prob = mlp_forward(flattened(w), params, mode, cache);
      const LossGrad lg = binary_cross_entropy(prob, required_label(w));
      if (!std::isfinite(lg.loss))
        fail(ErrorCode::DivergedTraining,
             "non-finite training loss at epoch " + std::to_string(epoch));
      train_sum += lg.loss;
      mlp_backward(cache, params, lg.grad, config.l2, grads);
      adagrad_step(pviews, gviews, opt);
    }

    double valid_sum = 0.0;
    for (const Window& w : valid_set) {
      const double prob = mlp_forward(flattened(w), params, ForwardMode::inference(), cache);
      valid_sum += binary_cross_entropy(prob, required_label(w)).loss;
    }
    const EpochLoss losses{train_sum / static_cast<double>(order.size()),
                           valid_sum / static_cast<double>(valid_set.size())};
    if (!std::isfinite(losses.valid))
      fail(ErrorCode::DivergedTraining,
           "non-finite validation loss at epoch " + std::to_string(epoch));
    out.history.push_back(losses);
    if (losses.valid < best_valid) {
      best_valid = losses.valid;
      out.params = params;
      out.best_epoch = epoch;
    }
  }
  return out;
}

WindowClassification classify_window(const LstmClassifierParams& params, const Window& window) {
  if (window.points.empty())
    fail(ErrorCode::InvalidWindow, "cannot classify an empty window");
  ForwardCache cache;
  lstm_forward(window.points, static_cast<Eigen::Index>(window.points.size()), params.net,
               ForwardMode::inference(), cache);
  const double prob = cache.predictions[cache.steps - 1];
  return {prob >= 0.5 ? 1 : 0, prob};
}

WindowClassification classify_window(const MlpParams& params, const Window& window) {
  MlpCache cache;
  const double prob = mlp_forward(flattened(window), params, ForwardMode::inference(), cache);
  return {prob >= 0.5 ? 1 : 0, prob};
}

}  // namespace tsad
