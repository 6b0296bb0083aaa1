#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "tsad/error.hpp"
#include "tsad/lstm.hpp"
#include "tsad/neural.hpp"
#include "tsad/rng.hpp"

using namespace tsad;

namespace {

double scalar_sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Scalar-loop reimplementation of one cell update, deliberately avoiding the
// library's vectorized path.
CellState oracle_cell_step(const Eigen::VectorXd& x, const CellState& prev,
                           const LstmCellParams& p) {
  const Eigen::Index hidden = p.hidden();
  CellState next{Eigen::VectorXd(hidden), Eigen::VectorXd(hidden)};
  for (Eigen::Index r = 0; r < hidden; ++r) {
    auto gate = [&](const Eigen::MatrixXd& w, const Eigen::MatrixXd& u,
                    const Eigen::MatrixXd& b) {
      double z = b(r, 0);
      for (Eigen::Index c = 0; c < x.size(); ++c) z += w(r, c) * x[c];
      for (Eigen::Index c = 0; c < hidden; ++c) z += u(r, c) * prev.h[c];
      return z;
    };
    const double i = scalar_sigmoid(gate(p.w_i, p.u_i, p.b_i));
    const double f = scalar_sigmoid(gate(p.w_f, p.u_f, p.b_f));
    const double o = scalar_sigmoid(gate(p.w_o, p.u_o, p.b_o));
    const double g = std::tanh(gate(p.w_c, p.u_c, p.b_c));
    next.c[r] = f * prev.c[r] + i * g;
    next.h[r] = o * std::tanh(next.c[r]);
  }
  return next;
}

std::vector<double> oracle_forward(const std::vector<double>& points, Eigen::Index n_steps,
                                   const StackedLstmParams& p) {
  CellState s1{Eigen::VectorXd::Zero(p.hidden), Eigen::VectorXd::Zero(p.hidden)};
  CellState s2{Eigen::VectorXd::Zero(p.hidden), Eigen::VectorXd::Zero(p.hidden)};
  std::vector<double> preds;
  for (Eigen::Index t = 0; t < n_steps; ++t) {
    Eigen::VectorXd x(1);
    x << points[static_cast<std::size_t>(t)];
    s1 = oracle_cell_step(x, s1, p.layer1);
    s2 = oracle_cell_step(s1.h, s2, p.layer2);
    double z = p.head_b(0, 0);
    for (Eigen::Index c = 0; c < p.hidden; ++c) z += p.head_w(0, c) * s2.h[c];
    preds.push_back(scalar_sigmoid(z));
  }
  return preds;
}

Window random_window(std::size_t len, std::uint64_t seed) {
  Rng rng(seed);
  Window w;
  for (std::size_t k = 0; k < len; ++k) w.points.push_back(rng.uniform());
  w.label = 0;
  return w;
}

}  // namespace

TEST_CASE("init draws bounded weights, zero biases and forget bias 1") {
  const StackedLstmParams p = StackedLstmParams::init(1, 5, 42);
  CHECK(p.input_dim == 1);
  CHECK(p.hidden == 5);
  CHECK_NOTHROW(p.validate());
  CHECK(p.layer1.b_i.isZero());
  CHECK(p.layer1.b_f == Eigen::MatrixXd::Constant(5, 1, 1.0));
  CHECK(p.layer2.b_f == Eigen::MatrixXd::Constant(5, 1, 1.0));
  CHECK(p.head_b.isZero());
  CHECK(p.layer1.w_i.cwiseAbs().maxCoeff() <= 1.0);
  CHECK(p.layer1.u_i.cwiseAbs().maxCoeff() <= 1.0 / std::sqrt(5.0));

  const StackedLstmParams q = StackedLstmParams::init(1, 5, 42);
  CHECK(p.layer1.w_c == q.layer1.w_c);
  CHECK(p.head_w == q.head_w);
  const StackedLstmParams r = StackedLstmParams::init(1, 5, 43);
  CHECK(p.head_w != r.head_w);

  CHECK(StackedLstmParams::zeros_like(p).head_w.isZero());
  CHECK_THROWS_AS(StackedLstmParams::init(0, 5, 1), Error);
}

TEST_CASE("views walk all 26 blocks in a stable order") {
  StackedLstmParams p = StackedLstmParams::init(1, 3, 0);
  const std::vector<ParamView> v = p.views();
  REQUIRE(v.size() == 26);
  CHECK(v.front().name == "layer1.w_i");
  CHECK(v[12].name == "layer2.w_i");
  CHECK(v[24].name == "head_w");
  CHECK(v.back().name == "head_b");
  CHECK(v.back().values == &p.head_b);
}

TEST_CASE("lstm_cell_step matches a scalar-loop oracle") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const StackedLstmParams p = StackedLstmParams::init(2, 4, seed);
    Rng rng(seed + 100);
    Eigen::VectorXd x(2);
    x << rng.normal(), rng.normal();
    CellState prev{Eigen::VectorXd(4), Eigen::VectorXd(4)};
    for (int r = 0; r < 4; ++r) {
      prev.h[r] = rng.normal(0.0, 0.5);
      prev.c[r] = rng.normal(0.0, 0.5);
    }
    const auto [next, cache] = lstm_cell_step(x, prev, p.layer1);
    const CellState expect = oracle_cell_step(x, prev, p.layer1);
    for (int r = 0; r < 4; ++r) {
      CHECK(next.h[r] == doctest::Approx(expect.h[r]).epsilon(1e-13));
      CHECK(next.c[r] == doctest::Approx(expect.c[r]).epsilon(1e-13));
    }
    CHECK(cache.i.size() == 4);
  }
}

TEST_CASE("stacked forward matches an independent unroll") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const StackedLstmParams p = StackedLstmParams::init(1, 3, seed);
    const Window w = random_window(9, seed + 50);
    ForwardCache cache;
    const std::vector<double> preds = forward(w, p, ForwardMode::inference(), cache);
    REQUIRE(preds.size() == w.points.size() - 1);  // one-step-ahead: T-1 outputs
    const std::vector<double> expect = oracle_forward(w.points, 8, p);
    for (std::size_t t = 0; t < preds.size(); ++t)
      CHECK(preds[t] == doctest::Approx(expect[t]).epsilon(1e-12));
  }
}

TEST_CASE("prediction_errors subtracts predictions from the next points") {
  const StackedLstmParams p = StackedLstmParams::init(1, 4, 3);
  Window w = random_window(12, 8);
  w.label = 1;
  w.source_offset = 77;
  const ErrorVector ev = prediction_errors(p, w);
  REQUIRE(ev.errors.size() == 11);
  CHECK(ev.label == 1);
  CHECK(ev.source_id == 77);
  const std::vector<double> expect = oracle_forward(w.points, 11, p);
  for (std::size_t t = 0; t < ev.errors.size(); ++t)
    CHECK(ev.errors[t] == doctest::Approx(w.points[t + 1] - expect[t]).epsilon(1e-12));
}

TEST_CASE("bptt gradients agree with central differences") {
  StackedLstmParams p = StackedLstmParams::init(1, 3, 11);
  const Window w = random_window(6, 21);
  ForwardCache cache;
  forward(w, p, ForwardMode::inference(), cache);
  StackedLstmGrads grads = bptt_backward(cache, w, p, 0.0);

  ForwardCache probe;
  const auto loss = [&] {
    const std::vector<double> preds = forward(w, p, ForwardMode::inference(), probe);
    return mse_final_step(preds.back(), w.points.back()).loss;
  };
  const double max_rel = finite_diff_grad_check(loss, p.views(), grads.views());
  CHECK(max_rel <= 1e-4);
}

TEST_CASE("l2 adds weight decay to weight gradients but not biases") {
  StackedLstmParams p = StackedLstmParams::init(1, 3, 13);
  const Window w = random_window(5, 14);
  ForwardCache cache;
  forward(w, p, ForwardMode::inference(), cache);
  const double l2 = 0.25;
  StackedLstmGrads plain = bptt_backward(cache, w, p, 0.0);
  StackedLstmGrads decayed = bptt_backward(cache, w, p, l2);
  CHECK((decayed.layer1.w_i - plain.layer1.w_i - l2 * p.layer1.w_i).cwiseAbs().maxCoeff() <=
        1e-14);
  CHECK((decayed.layer2.u_c - plain.layer2.u_c - l2 * p.layer2.u_c).cwiseAbs().maxCoeff() <=
        1e-14);
  CHECK((decayed.head_w - plain.head_w - l2 * p.head_w).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(decayed.layer1.b_i == plain.layer1.b_i);
  CHECK(decayed.head_b == plain.head_b);
}

TEST_CASE("backward refuses stale or mismatched caches") {
  StackedLstmParams p = StackedLstmParams::init(1, 3, 17);
  const Window w = random_window(6, 18);
  ForwardCache cache;
  forward(w, p, ForwardMode::inference(), cache);

  Window other = w;
  other.points[2] += 0.5;
  try {
    bptt_backward(cache, other, p, 0.0);
    FAIL("expected CacheMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CacheMismatch);
  }

  p.head_b(0, 0) += 1.0;  // parameters moved since the forward pass
  CHECK_THROWS_AS(bptt_backward(cache, w, p, 0.0), Error);
}

TEST_CASE("dropout draws masks only in training mode and stays deterministic") {
  const StackedLstmParams p = StackedLstmParams::init(1, 6, 19);
  const Window w = random_window(8, 20);
  ForwardCache cache;
  const std::vector<double> inference = forward(w, p, ForwardMode::inference(), cache);

  Rng rng_a(5);
  ForwardCache cache_a;
  const std::vector<double> train_a =
      forward(w, p, ForwardMode::training(0.4, rng_a), cache_a);
  Rng rng_b(5);
  ForwardCache cache_b;
  const std::vector<double> train_b =
      forward(w, p, ForwardMode::training(0.4, rng_b), cache_b);
  CHECK(train_a == train_b);
  CHECK(train_a != inference);

  Rng rng_c(5);
  ForwardCache cache_c;
  CHECK(forward(w, p, ForwardMode::training(0.0, rng_c), cache_c) == inference);
}

TEST_CASE("train_predictor with zero epochs returns the seeded initialization") {
  DatasetSplit split;
  for (std::uint64_t k = 0; k < 4; ++k) split.normal_train.push_back(random_window(6, k));
  TrainConfig tc;
  tc.hidden = 3;
  tc.epochs = 0;
  tc.seed = 31;
  const TrainedPredictor out = train_predictor(split, tc);
  CHECK(out.best_epoch == -1);
  CHECK(out.history.empty());
  const StackedLstmParams expect = StackedLstmParams::init(1, 3, mix_seed(31, 0));
  CHECK(out.params.head_w == expect.head_w);
  CHECK(out.params.layer1.w_i == expect.layer1.w_i);
}

TEST_CASE("train_predictor is deterministic and tracks the best validation epoch") {
  DatasetSplit split;
  for (std::uint64_t k = 0; k < 12; ++k) split.normal_train.push_back(random_window(8, k));
  for (std::uint64_t k = 20; k < 24; ++k) split.normal_valid.push_back(random_window(8, k));
  TrainConfig tc;
  tc.hidden = 4;
  tc.epochs = 5;
  tc.learning_rate = 0.05;
  tc.seed = 33;

  const TrainedPredictor a = train_predictor(split, tc);
  const TrainedPredictor b = train_predictor(split, tc);
  CHECK(a.params.head_w == b.params.head_w);
  CHECK(a.params.layer2.u_f == b.params.layer2.u_f);
  REQUIRE(a.history.size() == 5);
  REQUIRE(a.best_epoch >= 0);
  for (const EpochLoss& e : a.history) {
    CHECK(e.valid >= a.history[static_cast<std::size_t>(a.best_epoch)].valid);
  }
}

TEST_CASE("the predictor learns a smooth sine to small error") {
  DatasetSplit split;
  Rng rng(2);
  for (int n = 0; n < 60; ++n) {
    Window w;
    const double phase = rng.uniform(0.0, 6.28318);
    for (int k = 0; k < 30; ++k)
      w.points.push_back(0.5 + 0.4 * std::sin(phase + 0.35 * static_cast<double>(k)));
    w.label = 0;
    split.normal_train.push_back(std::move(w));
  }
  TrainConfig tc;
  tc.hidden = 8;
  tc.epochs = 30;
  tc.learning_rate = 0.1;
  tc.seed = 1;
  const TrainedPredictor trained = train_predictor(split, tc);

  double se = 0.0;
  std::size_t count = 0;
  for (int n = 0; n < 10; ++n) {
    Window w;
    const double phase = rng.uniform(0.0, 6.28318);
    for (int k = 0; k < 30; ++k)
      w.points.push_back(0.5 + 0.4 * std::sin(phase + 0.35 * static_cast<double>(k)));
    const ErrorVector ev = prediction_errors(trained.params, w);
    for (double e : ev.errors) {
      se += e * e;
      ++count;
    }
  }
  const double rmse = std::sqrt(se / static_cast<double>(count));
  CHECK(rmse <= 0.05);
}

TEST_CASE("training rejects unusable windows") {
  DatasetSplit split;
  CHECK_THROWS_AS(train_predictor(split, TrainConfig{}), Error);
  split.normal_train.push_back(Window{{0.5}, 0, 0});
  CHECK_THROWS_AS(train_predictor(split, TrainConfig{}), Error);
}
