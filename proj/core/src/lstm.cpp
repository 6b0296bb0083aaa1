#include "tsad/lstm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "tsad/error.hpp"

namespace tsad {

namespace {

void apply_sigmoid(Eigen::Ref<Eigen::VectorXd> v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = sigmoid(v[k]);
}

void affine(const Eigen::MatrixXd& w, const Eigen::Ref<const Eigen::VectorXd>& x,
            const Eigen::MatrixXd& u, const Eigen::Ref<const Eigen::VectorXd>& h,
            const Eigen::MatrixXd& b, Eigen::Ref<Eigen::VectorXd> out) {
  out.noalias() = w * x;
  out.noalias() += u * h;
  out += b.col(0);
}

// One cell update written into externally owned buffers, shared by the
// public single-step API and the unrolled forward pass.
void cell_step_into(const LstmCellParams& p, const Eigen::Ref<const Eigen::VectorXd>& x,
                    const Eigen::Ref<const Eigen::VectorXd>& h_prev,
                    const Eigen::Ref<const Eigen::VectorXd>& c_prev,
                    Eigen::Ref<Eigen::VectorXd> i, Eigen::Ref<Eigen::VectorXd> f,
                    Eigen::Ref<Eigen::VectorXd> o, Eigen::Ref<Eigen::VectorXd> g,
                    Eigen::Ref<Eigen::VectorXd> c, Eigen::Ref<Eigen::VectorXd> tanh_c,
                    Eigen::Ref<Eigen::VectorXd> h) {
  affine(p.w_i, x, p.u_i, h_prev, p.b_i, i);
  apply_sigmoid(i);
  affine(p.w_f, x, p.u_f, h_prev, p.b_f, f);
  apply_sigmoid(f);
  affine(p.w_o, x, p.u_o, h_prev, p.b_o, o);
  apply_sigmoid(o);
  affine(p.w_c, x, p.u_c, h_prev, p.b_c, g);
  g = g.array().tanh();
  c.array() = f.array() * c_prev.array() + i.array() * g.array();
  tanh_c = c.array().tanh();
  h.array() = o.array() * tanh_c.array();
}

bool cell_shapes_ok(const LstmCellParams& p, Eigen::Index hidden, Eigen::Index input_dim) {
  auto ok = [&](const Eigen::MatrixXd& m, Eigen::Index rows, Eigen::Index cols) {
    return m.rows() == rows && m.cols() == cols;
  };
  return ok(p.w_i, hidden, input_dim) && ok(p.w_f, hidden, input_dim) &&
         ok(p.w_o, hidden, input_dim) && ok(p.w_c, hidden, input_dim) &&
         ok(p.u_i, hidden, hidden) && ok(p.u_f, hidden, hidden) && ok(p.u_o, hidden, hidden) &&
         ok(p.u_c, hidden, hidden) && ok(p.b_i, hidden, 1) && ok(p.b_f, hidden, 1) &&
         ok(p.b_o, hidden, 1) && ok(p.b_c, hidden, 1);
}

bool stacked_shapes_ok(const StackedLstmParams& p) {
  return cell_shapes_ok(p.layer1, p.hidden, p.input_dim) &&
         cell_shapes_ok(p.layer2, p.hidden, p.hidden) && p.head_w.rows() == 1 &&
         p.head_w.cols() == p.hidden && p.head_b.rows() == 1 && p.head_b.cols() == 1;
}

void check_stacked_shapes(const StackedLstmParams& p) {
  if (!stacked_shapes_ok(p))
    fail(ErrorCode::ShapeError, "stacked LSTM parameter shapes are inconsistent");
}

double layer_sum(const LstmCellParams& l) {
  return l.w_i.sum() + l.u_i.sum() + l.b_i.sum() + l.w_f.sum() + l.u_f.sum() + l.b_f.sum() +
         l.w_o.sum() + l.u_o.sum() + l.b_o.sum() + l.w_c.sum() + l.u_c.sum() + l.b_c.sum();
}

double param_sum(const StackedLstmParams& p) {
  return layer_sum(p.layer1) + layer_sum(p.layer2) + p.head_w.sum() + p.head_b.sum();
}

struct LayerBackwardBuffers {
  Eigen::VectorXd dc_total, dz_i, dz_f, dz_o, dz_g, scratch;
  void resize(Eigen::Index hidden) {
    dc_total.resize(hidden);
    dz_i.resize(hidden);
    dz_f.resize(hidden);
    dz_o.resize(hidden);
    dz_g.resize(hidden);
    scratch.resize(hidden);
  }
};

struct LayerGradViews {
  Eigen::MatrixXd *w_i, *u_i, *b_i, *w_f, *u_f, *b_f, *w_o, *u_o, *b_o, *w_c, *u_c, *b_c;
  explicit LayerGradViews(LstmCellParams& g)
      : w_i(&g.w_i), u_i(&g.u_i), b_i(&g.b_i), w_f(&g.w_f), u_f(&g.u_f), b_f(&g.b_f),
        w_o(&g.w_o), u_o(&g.u_o), b_o(&g.b_o), w_c(&g.w_c), u_c(&g.u_c), b_c(&g.b_c) {}
};

// Backward through one cell at step t. dh is the total gradient reaching h_t;
// dc_in carries the recurrent cell gradient from step t+1. Writes the
// gradients flowing to the step input, h_{t-1} and c_{t-1}.
void cell_step_backward(const LstmCellParams& p, const ForwardCache::LayerCache& cl,
                        Eigen::Index t, const Eigen::Ref<const Eigen::VectorXd>& x,
                        const Eigen::VectorXd& dh, const Eigen::VectorXd& dc_in,
                        const Eigen::VectorXd& zero_state, LayerGradViews grad,
                        LayerBackwardBuffers& buf, Eigen::VectorXd& dx_out,
                        Eigen::VectorXd& dh_prev_out, Eigen::VectorXd& dc_prev_out) {
  const auto i = cl.i.col(t).array();
  const auto f = cl.f.col(t).array();
  const auto o = cl.o.col(t).array();
  const auto g = cl.g.col(t).array();
  const auto tanh_c = cl.tanh_c.col(t).array();
  const Eigen::Ref<const Eigen::VectorXd> c_prev =
      t > 0 ? Eigen::Ref<const Eigen::VectorXd>(cl.c.col(t - 1))
            : Eigen::Ref<const Eigen::VectorXd>(zero_state);
  const Eigen::Ref<const Eigen::VectorXd> h_prev =
      t > 0 ? Eigen::Ref<const Eigen::VectorXd>(cl.h.col(t - 1))
            : Eigen::Ref<const Eigen::VectorXd>(zero_state);

  buf.dc_total.array() = dc_in.array() + dh.array() * o * (1.0 - tanh_c.square());
  buf.dz_o.array() = dh.array() * tanh_c * o * (1.0 - o);
  buf.dz_f.array() = buf.dc_total.array() * c_prev.array() * f * (1.0 - f);
  buf.dz_i.array() = buf.dc_total.array() * g * i * (1.0 - i);
  buf.dz_g.array() = buf.dc_total.array() * i * (1.0 - g.square());

  grad.w_i->noalias() += buf.dz_i * x.transpose();
  grad.u_i->noalias() += buf.dz_i * h_prev.transpose();
  grad.b_i->col(0) += buf.dz_i;
  grad.w_f->noalias() += buf.dz_f * x.transpose();
  grad.u_f->noalias() += buf.dz_f * h_prev.transpose();
  grad.b_f->col(0) += buf.dz_f;
  grad.w_o->noalias() += buf.dz_o * x.transpose();
  grad.u_o->noalias() += buf.dz_o * h_prev.transpose();
  grad.b_o->col(0) += buf.dz_o;
  grad.w_c->noalias() += buf.dz_g * x.transpose();
  grad.u_c->noalias() += buf.dz_g * h_prev.transpose();
  grad.b_c->col(0) += buf.dz_g;

  dx_out.noalias() = p.w_i.transpose() * buf.dz_i;
  dx_out.noalias() += p.w_f.transpose() * buf.dz_f;
  dx_out.noalias() += p.w_o.transpose() * buf.dz_o;
  dx_out.noalias() += p.w_c.transpose() * buf.dz_g;

  dh_prev_out.noalias() = p.u_i.transpose() * buf.dz_i;
  dh_prev_out.noalias() += p.u_f.transpose() * buf.dz_f;
  dh_prev_out.noalias() += p.u_o.transpose() * buf.dz_o;
  dh_prev_out.noalias() += p.u_c.transpose() * buf.dz_g;

  dc_prev_out.array() = buf.dc_total.array() * f;
}

}  // namespace

void ForwardCache::LayerCache::resize(Eigen::Index hidden, Eigen::Index steps) {
  i.resize(hidden, steps);
  f.resize(hidden, steps);
  o.resize(hidden, steps);
  g.resize(hidden, steps);
  c.resize(hidden, steps);
  tanh_c.resize(hidden, steps);
  h.resize(hidden, steps);
}

void ForwardCache::resize(Eigen::Index input_dim, Eigen::Index hidden, Eigen::Index n_steps) {
  steps = n_steps;
  l1.resize(hidden, n_steps);
  l2.resize(hidden, n_steps);
  x1.resize(input_dim, n_steps);
  x2.resize(hidden, n_steps);
  x3.resize(hidden, n_steps);
  head_z.resize(n_steps);
  predictions.resize(n_steps);
}

StackedLstmParams StackedLstmParams::init(Eigen::Index input_dim, Eigen::Index hidden,
                                          std::uint64_t seed) {
  if (input_dim < 1 || hidden < 1)
    fail(ErrorCode::InvalidArgument, "input_dim and hidden must be >= 1");
  StackedLstmParams p;
  p.input_dim = input_dim;
  p.hidden = hidden;
  Rng rng(seed);
  auto init_layer = [&](LstmCellParams& l, Eigen::Index in_dim) {
    l.w_i = init_params("w_i", hidden, in_dim, in_dim, rng).values;
    l.u_i = init_params("u_i", hidden, hidden, hidden, rng).values;
    l.b_i = Eigen::MatrixXd::Zero(hidden, 1);
    l.w_f = init_params("w_f", hidden, in_dim, in_dim, rng).values;
    l.u_f = init_params("u_f", hidden, hidden, hidden, rng).values;
    l.b_f = Eigen::MatrixXd::Constant(hidden, 1, 1.0);
    l.w_o = init_params("w_o", hidden, in_dim, in_dim, rng).values;
    l.u_o = init_params("u_o", hidden, hidden, hidden, rng).values;
    l.b_o = Eigen::MatrixXd::Zero(hidden, 1);
    l.w_c = init_params("w_c", hidden, in_dim, in_dim, rng).values;
    l.u_c = init_params("u_c", hidden, hidden, hidden, rng).values;
    l.b_c = Eigen::MatrixXd::Zero(hidden, 1);
  };
  init_layer(p.layer1, input_dim);
  init_layer(p.layer2, hidden);
  p.head_w = init_params("head_w", 1, hidden, hidden, rng).values;
  p.head_b = Eigen::MatrixXd::Zero(1, 1);
  return p;
}

StackedLstmParams StackedLstmParams::zeros_like(const StackedLstmParams& shape) {
  StackedLstmParams z = shape;
  z.set_zero();
  return z;
}

void StackedLstmParams::validate() const { check_stacked_shapes(*this); }

void StackedLstmParams::set_zero() {
  auto zero_layer = [](LstmCellParams& l) {
    for (Eigen::MatrixXd* m : {&l.w_i, &l.u_i, &l.b_i, &l.w_f, &l.u_f, &l.b_f, &l.w_o, &l.u_o,
                               &l.b_o, &l.w_c, &l.u_c, &l.b_c})
      m->setZero();
  };
  zero_layer(layer1);
  zero_layer(layer2);
  head_w.setZero();
  head_b.setZero();
}

std::vector<ParamView> StackedLstmParams::views() {
  std::vector<ParamView> v;
  v.reserve(26);
  auto add_layer = [&](const std::string& prefix, LstmCellParams& l) {
    v.push_back({prefix + ".w_i", &l.w_i});
    v.push_back({prefix + ".u_i", &l.u_i});
    v.push_back({prefix + ".b_i", &l.b_i});
    v.push_back({prefix + ".w_f", &l.w_f});
    v.push_back({prefix + ".u_f", &l.u_f});
    v.push_back({prefix + ".b_f", &l.b_f});
    v.push_back({prefix + ".w_o", &l.w_o});
    v.push_back({prefix + ".u_o", &l.u_o});
    v.push_back({prefix + ".b_o", &l.b_o});
    v.push_back({prefix + ".w_c", &l.w_c});
    v.push_back({prefix + ".u_c", &l.u_c});
    v.push_back({prefix + ".b_c", &l.b_c});
  };
  add_layer("layer1", layer1);
  add_layer("layer2", layer2);
  v.push_back({"head_w", &head_w});
  v.push_back({"head_b", &head_b});
  return v;
}

std::pair<CellState, CellStepCache> lstm_cell_step(const Eigen::VectorXd& x,
                                                   const CellState& prev,
                                                   const LstmCellParams& params) {
  const Eigen::Index hidden = params.hidden();
  if (!cell_shapes_ok(params, hidden, params.input_dim()))
    fail(ErrorCode::ShapeError, "cell parameter block shapes are inconsistent");
  if (x.size() != params.input_dim())
    fail(ErrorCode::ShapeError, "input size does not match cell input dimension");
  if (prev.h.size() != hidden || prev.c.size() != hidden)
    fail(ErrorCode::ShapeError, "previous state size does not match hidden size");

  CellState next{Eigen::VectorXd(hidden), Eigen::VectorXd(hidden)};
  CellStepCache cache{Eigen::VectorXd(hidden), Eigen::VectorXd(hidden),
                      Eigen::VectorXd(hidden), Eigen::VectorXd(hidden),
                      Eigen::VectorXd(hidden)};
  cell_step_into(params, x, prev.h, prev.c, cache.i, cache.f, cache.o, cache.g, next.c,
                 cache.tanh_c, next.h);
  return {std::move(next), std::move(cache)};
}

void lstm_forward(const std::vector<double>& points, Eigen::Index n_steps,
                  const StackedLstmParams& params, const ForwardMode& mode,
                  ForwardCache& cache) {
  check_stacked_shapes(params);
  if (params.input_dim != 1)
    fail(ErrorCode::ShapeError, "series forward pass requires input_dim == 1");
  if (n_steps < 1 || static_cast<std::size_t>(n_steps) > points.size())
    fail(ErrorCode::InvalidArgument, "step count must be in [1, points.size()]");

  const Eigen::Index hidden = params.hidden;
  cache.resize(1, hidden, n_steps);
  cache.points = points;
  cache.params_sum = param_sum(params);

  if (mode.train && mode.dropout > 0.0) {
    if (mode.rng == nullptr)
      fail(ErrorCode::InvalidArgument, "training mode with dropout needs an RNG");
    cache.mask_in = dropout_mask(1, mode.dropout, *mode.rng);
    cache.mask_mid = dropout_mask(hidden, mode.dropout, *mode.rng);
    cache.mask_head = dropout_mask(hidden, mode.dropout, *mode.rng);
  } else {
    cache.mask_in = Eigen::VectorXd::Ones(1);
    cache.mask_mid = Eigen::VectorXd::Ones(hidden);
    cache.mask_head = Eigen::VectorXd::Ones(hidden);
  }

  const Eigen::VectorXd zero_state = Eigen::VectorXd::Zero(hidden);
  for (Eigen::Index t = 0; t < n_steps; ++t) {
    cache.x1(0, t) = cache.mask_in[0] * points[static_cast<std::size_t>(t)];
    const Eigen::Ref<const Eigen::VectorXd> h1_prev =
        t > 0 ? Eigen::Ref<const Eigen::VectorXd>(cache.l1.h.col(t - 1))
              : Eigen::Ref<const Eigen::VectorXd>(zero_state);
    const Eigen::Ref<const Eigen::VectorXd> c1_prev =
        t > 0 ? Eigen::Ref<const Eigen::VectorXd>(cache.l1.c.col(t - 1))
              : Eigen::Ref<const Eigen::VectorXd>(zero_state);
    cell_step_into(params.layer1, cache.x1.col(t), h1_prev, c1_prev, cache.l1.i.col(t),
                   cache.l1.f.col(t), cache.l1.o.col(t), cache.l1.g.col(t), cache.l1.c.col(t),
                   cache.l1.tanh_c.col(t), cache.l1.h.col(t));

    cache.x2.col(t).array() = cache.mask_mid.array() * cache.l1.h.col(t).array();
    const Eigen::Ref<const Eigen::VectorXd> h2_prev =
        t > 0 ? Eigen::Ref<const Eigen::VectorXd>(cache.l2.h.col(t - 1))
              : Eigen::Ref<const Eigen::VectorXd>(zero_state);
    const Eigen::Ref<const Eigen::VectorXd> c2_prev =
        t > 0 ? Eigen::Ref<const Eigen::VectorXd>(cache.l2.c.col(t - 1))
              : Eigen::Ref<const Eigen::VectorXd>(zero_state);
    cell_step_into(params.layer2, cache.x2.col(t), h2_prev, c2_prev, cache.l2.i.col(t),
                   cache.l2.f.col(t), cache.l2.o.col(t), cache.l2.g.col(t), cache.l2.c.col(t),
                   cache.l2.tanh_c.col(t), cache.l2.h.col(t));

    cache.x3.col(t).array() = cache.mask_head.array() * cache.l2.h.col(t).array();
    cache.head_z[t] = (params.head_w * cache.x3.col(t))(0, 0) + params.head_b(0, 0);
    cache.predictions[t] = sigmoid(cache.head_z[t]);
  }
}

void lstm_backward(const ForwardCache& cache, const StackedLstmParams& params,
                   double dloss_dpred, double l2, StackedLstmGrads& grads) {
  check_stacked_shapes(params);
  if (cache.steps < 1) fail(ErrorCode::CacheMismatch, "empty forward cache");
  if (param_sum(params) != cache.params_sum)
    fail(ErrorCode::CacheMismatch, "parameters changed since the forward pass");

  if (grads.hidden == params.hidden && grads.input_dim == params.input_dim &&
      stacked_shapes_ok(grads))
    grads.set_zero();
  else
    grads = StackedLstmParams::zeros_like(params);

  const Eigen::Index hidden = params.hidden;
  const Eigen::Index last = cache.steps - 1;
  const Eigen::VectorXd zero_state = Eigen::VectorXd::Zero(hidden);

  LayerBackwardBuffers buf;
  buf.resize(hidden);
  Eigen::VectorXd dh2(hidden), dc2 = Eigen::VectorXd::Zero(hidden);
  Eigen::VectorXd dh1 = Eigen::VectorXd::Zero(hidden), dc1 = Eigen::VectorXd::Zero(hidden);
  Eigen::VectorXd dx2(hidden), dh2_prev(hidden), dc2_prev(hidden);
  Eigen::VectorXd dx1(1), dh1_prev(hidden), dc1_prev(hidden);

  const double pred = cache.predictions[last];
  const double dz_head = dloss_dpred * pred * (1.0 - pred);
  grads.head_w.noalias() += dz_head * cache.x3.col(last).transpose();
  grads.head_b(0, 0) += dz_head;
  dh2.array() = dz_head * params.head_w.transpose().col(0).array() * cache.mask_head.array();

  LayerGradViews g2(grads.layer2);
  LayerGradViews g1(grads.layer1);
  for (Eigen::Index t = last; t >= 0; --t) {
    cell_step_backward(params.layer2, cache.l2, t, cache.x2.col(t), dh2, dc2, zero_state, g2,
                       buf, dx2, dh2_prev, dc2_prev);
    dh2 = dh2_prev;
    dc2 = dc2_prev;
    dh1.array() += dx2.array() * cache.mask_mid.array();

    cell_step_backward(params.layer1, cache.l1, t, cache.x1.col(t), dh1, dc1, zero_state, g1,
                       buf, dx1, dh1_prev, dc1_prev);
    dh1 = dh1_prev;
    dc1 = dc1_prev;
  }

  if (l2 != 0.0) {
    auto decay_layer = [l2](LstmCellParams& g, const LstmCellParams& p) {
      g.w_i += l2 * p.w_i;
      g.u_i += l2 * p.u_i;
      g.w_f += l2 * p.w_f;
      g.u_f += l2 * p.u_f;
      g.w_o += l2 * p.w_o;
      g.u_o += l2 * p.u_o;
      g.w_c += l2 * p.w_c;
      g.u_c += l2 * p.u_c;
    };
    decay_layer(grads.layer1, params.layer1);
    decay_layer(grads.layer2, params.layer2);
    grads.head_w += l2 * params.head_w;
  }
}

std::vector<double> forward(const Window& window, const StackedLstmParams& params,
                            const ForwardMode& mode, ForwardCache& cache) {
  if (window.points.size() < 2)
    fail(ErrorCode::InvalidWindow, "window needs at least 2 points for one-step prediction");
  lstm_forward(window.points, static_cast<Eigen::Index>(window.points.size()) - 1, params,
               mode, cache);
  return std::vector<double>(cache.predictions.data(), cache.predictions.data() + cache.steps);
}

StackedLstmGrads bptt_backward(const ForwardCache& cache, const Window& window,
                               const StackedLstmParams& params, double l2) {
  if (cache.points != window.points)
    fail(ErrorCode::CacheMismatch, "cache was built from a different window");
  if (static_cast<std::size_t>(cache.steps) + 1 != window.points.size())
    fail(ErrorCode::CacheMismatch, "cache step count does not match the window");
  const double target = window.points.back();
  const LossGrad lg = mse_final_step(cache.predictions[cache.steps - 1], target);
  StackedLstmGrads grads = StackedLstmParams::zeros_like(params);
  lstm_backward(cache, params, lg.grad, l2, grads);
  return grads;
}

TrainedPredictor train_predictor(const DatasetSplit& split, const TrainConfig& config) {
  if (split.normal_train.empty())
    fail(ErrorCode::EmptyDataset, "predictor training requires normal windows");
  for (const Window& w : split.normal_train)
    if (w.points.size() < 2)
      fail(ErrorCode::InvalidWindow, "training windows need at least 2 points");

  StackedLstmParams params = StackedLstmParams::init(1, config.hidden, mix_seed(config.seed, 0));
  Rng train_rng(mix_seed(config.seed, 1));
  AdagradState opt{config.learning_rate, 1e-8, {}};
  StackedLstmGrads grads = StackedLstmParams::zeros_like(params);
  std::vector<ParamView> pviews = params.views();
  std::vector<ParamView> gviews = grads.views();

  const std::vector<Window>& valid =
      split.normal_valid.empty() ? split.normal_train : split.normal_valid;

  TrainedPredictor out;
  out.params = params;
  out.history.reserve(static_cast<std::size_t>(std::max(config.epochs, 0)));
  double best_valid = std::numeric_limits<double>::infinity();

  ForwardCache cache;
  std::vector<std::size_t> order(split.normal_train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    train_rng.shuffle(order);
    double train_sum = 0.0;
    for (std::size_t idx : order) {
      const Window& w = split.normal_train[idx];
      const ForwardMode mode = ForwardMode::training(config.dropout, train_rng);
      lstm_forward(w.points, static_cast<Eigen::Index>(w.points.size()) - 1, params, mode,
                   cache);
      const LossGrad lg = mse_final_step(cache.predictions[cache.steps - 1], w.points.back());
      if (!std::isfinite(lg.loss))
        fail(ErrorCode::DivergedTraining,
             "non-finite training loss at epoch " + std::to_string(epoch));
      train_sum += lg.loss;
      lstm_backward(cache, params, lg.grad, config.l2, grads);
      adagrad_step(pviews, gviews, opt);
    }

    double valid_sum = 0.0;
    for (const Window& w : valid) {
      lstm_forward(w.points, static_cast<Eigen::Index>(w.points.size()) - 1, params,
                   ForwardMode::inference(), cache);
      valid_sum += mse_final_step(cache.predictions[cache.steps - 1], w.points.back()).loss;
    }
    const EpochLoss losses{train_sum / static_cast<double>(order.size()),
                           valid_sum / static_cast<double>(valid.size())};
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

ErrorVector prediction_errors(const StackedLstmParams& params, const Window& window) {
  ForwardCache cache;
  const std::vector<double> preds = forward(window, params, ForwardMode::inference(), cache);
  ErrorVector ev;
  ev.errors.resize(preds.size());
  for (std::size_t k = 0; k < preds.size(); ++k)
    ev.errors[k] = window.points[k + 1] - preds[k];
  ev.label = window.label.value_or(0);
  ev.source_id = window.source_offset;
  return ev;
}

}  // namespace tsad
