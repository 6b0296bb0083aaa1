#ifndef TSAD_BASELINES_HPP
#define TSAD_BASELINES_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "tsad/lstm.hpp"

namespace tsad {

// Supervised LSTM sequence classifier: the stacked predictor network with its
// sigmoid head read once, at the final step, as P(abnormal).
struct LstmClassifierParams {
  StackedLstmParams net;
};

// Dense input -> 10 -> 20 -> 10 -> 1 network, tanh hidden activations,
// sigmoid output.
struct MlpParams {
  Eigen::Index input_dim = 0;
  std::vector<Eigen::MatrixXd> weights;  // 4 matrices, layer by layer
  std::vector<Eigen::MatrixXd> biases;   // 4 column vectors

  static MlpParams init(Eigen::Index input_dim, std::uint64_t seed);
  static MlpParams zeros_like(const MlpParams& shape);
  void set_zero();
  std::vector<ParamView> views();
};

struct MlpCache {
  Eigen::VectorXd x;
  Eigen::VectorXd z1, a1, a1m, z2, a2, a2m, z3, a3, a3m;
  double z4 = 0.0;
  double prob = 0.5;
  Eigen::VectorXd mask1, mask2, mask3;
};

// Returns P(abnormal). Train mode draws one dropout mask per hidden layer
// per call; inference applies none.
double mlp_forward(const Eigen::VectorXd& x, const MlpParams& params, const ForwardMode& mode,
                   MlpCache& cache);

// Gradient of a scalar loss in the output probability; l2 decays weights
// only. Overwrites `grads` like lstm_backward does.
void mlp_backward(const MlpCache& cache, const MlpParams& params, double dloss_dprob,
                  double l2, MlpParams& grads);

struct TrainedLstmClassifier {
  LstmClassifierParams params;
  std::vector<EpochLoss> history;
  int best_epoch = -1;
};

struct TrainedMlp {
  MlpParams params;
  std::vector<EpochLoss> history;
  int best_epoch = -1;
};

// Both trainers: binary cross-entropy on labeled windows, Adagrad, one update
// per window, per-epoch seeded shuffle, best-validation-loss snapshot
// returned. Validation falls back to the training windows when empty.
TrainedLstmClassifier train_lstm_classifier(const std::vector<Window>& train,
                                            const std::vector<Window>& valid,
                                            const TrainConfig& config);
TrainedMlp train_mlp(const std::vector<Window>& train, const std::vector<Window>& valid,
                     const TrainConfig& config);

struct WindowClassification {
  int label = 0;
  double probability = 0.0;
};

// label = 1 iff P(abnormal) >= 0.5.
WindowClassification classify_window(const LstmClassifierParams& params, const Window& window);
WindowClassification classify_window(const MlpParams& params, const Window& window);

}  // namespace tsad

#endif  // TSAD_BASELINES_HPP
