#ifndef TSAD_LSTM_HPP
#define TSAD_LSTM_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "tsad/neural.hpp"
#include "tsad/rng.hpp"
#include "tsad/timeseries.hpp"

namespace tsad {

// One LSTM layer: per gate, input weights w (hidden x input), recurrent
// weights u (hidden x hidden) and bias b (hidden x 1). Gate order everywhere
// is input, forget, output, candidate.
struct LstmCellParams {
  Eigen::MatrixXd w_i, u_i, b_i;
  Eigen::MatrixXd w_f, u_f, b_f;
  Eigen::MatrixXd w_o, u_o, b_o;
  Eigen::MatrixXd w_c, u_c, b_c;

  Eigen::Index hidden() const { return w_i.rows(); }
  Eigen::Index input_dim() const { return w_i.cols(); }
};

struct CellState {
  Eigen::VectorXd h;
  Eigen::VectorXd c;
};

// Two stacked LSTM layers plus a dense scalar head with sigmoid, read at
// every unrolled step. The same parameter set serves the one-step-ahead
// predictor and the sequence classifier; only which head outputs feed the
// loss differs.
struct StackedLstmParams {
  Eigen::Index input_dim = 1;
  Eigen::Index hidden = 32;
  LstmCellParams layer1;
  LstmCellParams layer2;
  Eigen::MatrixXd head_w;  // 1 x hidden
  Eigen::MatrixXd head_b;  // 1 x 1

  // Weights uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)); biases zero except
  // the forget-gate biases, which start at 1 to avoid early memory washout.
  static StackedLstmParams init(Eigen::Index input_dim, Eigen::Index hidden,
                                std::uint64_t seed);
  static StackedLstmParams zeros_like(const StackedLstmParams& shape);
  void set_zero();
  void validate() const;  // block shapes consistent with input_dim/hidden

  // Mutable views over all 26 blocks in a fixed order shared with gradients,
  // the optimizer and the serializer.
  std::vector<ParamView> views();
};

using StackedLstmGrads = StackedLstmParams;

struct ForwardMode {
  bool train = false;
  double dropout = 0.0;
  Rng* rng = nullptr;

  static ForwardMode inference() { return {}; }
  static ForwardMode training(double dropout, Rng& rng) {
    return {true, dropout, &rng};
  }
};

// Everything the backward pass needs, laid out step-major so a cache can be
// reused across windows without reallocating. Column t holds step t.
struct ForwardCache {
  Eigen::Index steps = 0;
  std::vector<double> points;  // window copy, used for staleness detection
  double params_sum = 0.0;     // cheap fingerprint of the params at forward time

  // Per layer: gate activations, cell state, tanh(cell), hidden state.
  struct LayerCache {
    Eigen::MatrixXd i, f, o, g, c, tanh_c, h;
    void resize(Eigen::Index hidden, Eigen::Index steps);
  };
  LayerCache l1, l2;

  Eigen::MatrixXd x1;   // masked input to layer 1 (input_dim x steps)
  Eigen::MatrixXd x2;   // masked layer-1 output feeding layer 2 (hidden x steps)
  Eigen::MatrixXd x3;   // masked layer-2 output feeding the head (hidden x steps)
  Eigen::VectorXd mask_in, mask_mid, mask_head;
  Eigen::VectorXd head_z;       // head preactivation per step
  Eigen::VectorXd predictions;  // sigmoid(head_z)

  void resize(Eigen::Index input_dim, Eigen::Index hidden, Eigen::Index steps);
};

struct CellStepCache {
  Eigen::VectorXd i, f, o, g, tanh_c;
};

// Single cell update: i=sig(Wx+Uh+b), f and o likewise, g=tanh(...),
// c = f.c_prev + i.g, h = o.tanh(c).
std::pair<CellState, CellStepCache> lstm_cell_step(const Eigen::VectorXd& x,
                                                   const CellState& prev,
                                                   const LstmCellParams& params);

// Unrolls both layers over points[0..n_steps-1] and applies the head at each
// step. Dropout masks are drawn once per call (per window) for the three
// non-recurrent connections; inference mode uses identity masks.
void lstm_forward(const std::vector<double>& points, Eigen::Index n_steps,
                  const StackedLstmParams& params, const ForwardMode& mode,
                  ForwardCache& cache);

// Backpropagates a scalar loss applied to the final step's head output.
// dloss_dpred is dL/d(predictions[n_steps-1]); l2 adds l2*W to every weight
// gradient (biases excluded). Overwrites `grads`, reshaping it if needed, so
// one holder can be reused across windows.
void lstm_backward(const ForwardCache& cache, const StackedLstmParams& params,
                   double dloss_dpred, double l2, StackedLstmGrads& grads);

// Predictor-facing wrappers: T-1 steps, prediction t estimates point t+1.
std::vector<double> forward(const Window& window, const StackedLstmParams& params,
                            const ForwardMode& mode, ForwardCache& cache);
StackedLstmGrads bptt_backward(const ForwardCache& cache, const Window& window,
                               const StackedLstmParams& params, double l2);

struct TrainedPredictor {
  StackedLstmParams params;
  std::vector<EpochLoss> history;
  int best_epoch = -1;  // -1 when epochs == 0
};

// Trains on split.normal_train only, one Adagrad step per window, with
// validation loss tracked on split.normal_valid (falling back to the training
// windows when the validation set is empty). Returns the snapshot with the
// lowest validation loss.
TrainedPredictor train_predictor(const DatasetSplit& split, const TrainConfig& config);

struct ErrorVector {
  std::vector<double> errors;  // length T-1
  int label = 0;
  std::size_t source_id = 0;
};

// errors[t] = window.points[t+1] - prediction[t], inference mode.
ErrorVector prediction_errors(const StackedLstmParams& params, const Window& window);

}  // namespace tsad

#endif  // TSAD_LSTM_HPP
