#include "tsad/gauss_nb.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include "tsad/error.hpp"

namespace tsad {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

void ErrorDataset::validate() const {
  const std::size_t d = vectors.empty() ? 0 : vectors.front().errors.size();
  for (const ErrorVector& v : vectors) {
    if (v.errors.size() != d)
      fail(ErrorCode::ShapeError, "error vectors have mixed dimensionality");
    if (v.label != 0 && v.label != 1)
      fail(ErrorCode::InvalidArgument, "error vector labels must be 0 or 1");
  }
}

GaussNBModel fit_nb(const ErrorDataset& train, double variance_floor) {
  if (variance_floor <= 0.0)
    fail(ErrorCode::InvalidArgument, "variance floor must be positive");
  train.validate();
  const Eigen::Index d = train.dim();
  if (!train.vectors.empty() && d == 0)
    fail(ErrorCode::EmptyFeatures, "error vectors have zero attributes");

  std::array<std::int64_t, 2> counts{0, 0};
  for (const ErrorVector& v : train.vectors) counts[static_cast<std::size_t>(v.label)] += 1;
  if (counts[0] == 0 || counts[1] == 0)
    fail(ErrorCode::MissingClass, "training data must contain both classes");

  GaussNBModel model;
  model.variance_floor = variance_floor;
  model.prior_abnormal =
      static_cast<double>(counts[1]) / static_cast<double>(counts[0] + counts[1]);
  model.mean = Eigen::MatrixXd::Zero(2, d);
  model.variance = Eigen::MatrixXd::Zero(2, d);

  for (const ErrorVector& v : train.vectors)
    for (Eigen::Index j = 0; j < d; ++j)
      model.mean(v.label, j) += v.errors[static_cast<std::size_t>(j)];
  for (int c = 0; c < 2; ++c) model.mean.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);

  for (const ErrorVector& v : train.vectors)
    for (Eigen::Index j = 0; j < d; ++j) {
      const double dev = v.errors[static_cast<std::size_t>(j)] - model.mean(v.label, j);
      model.variance(v.label, j) += dev * dev;
    }
  for (int c = 0; c < 2; ++c) model.variance.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
  model.variance = model.variance.cwiseMax(variance_floor);
  return model;
}

double joint_log_likelihood(const GaussNBModel& model, const std::vector<double>& x,
                            int label) {
  if (label != 0 && label != 1) fail(ErrorCode::InvalidArgument, "class label must be 0 or 1");
  if (static_cast<Eigen::Index>(x.size()) != model.dim())
    fail(ErrorCode::ShapeError, "sample dimensionality does not match the model");
  const double prior = label == 1 ? model.prior_abnormal : 1.0 - model.prior_abnormal;
  double sum = std::log(prior);
  for (Eigen::Index j = 0; j < model.dim(); ++j) {
    const double var = model.variance(label, j);
    const double dev = x[static_cast<std::size_t>(j)] - model.mean(label, j);
    sum += -0.5 * std::log(kTwoPi * var) - dev * dev / (2.0 * var);
  }
  return sum;
}

Classification classify(const GaussNBModel& model, const std::vector<double>& x) {
  const double l0 = joint_log_likelihood(model, x, 0);
  const double l1 = joint_log_likelihood(model, x, 1);
  const double m = std::max(l0, l1);
  const double e0 = std::exp(l0 - m);
  const double e1 = std::exp(l1 - m);
  Classification result;
  result.posterior_abnormal = e1 / (e0 + e1);
  result.label = l1 >= l0 ? 1 : 0;
  return result;
}

ConfusionCounts evaluate_nb(const GaussNBModel& model, const ErrorDataset& test) {
  if (test.vectors.empty()) fail(ErrorCode::EmptyDataset, "no test vectors to evaluate");
  test.validate();
  std::vector<int> truth;
  std::vector<int> predicted;
  truth.reserve(test.vectors.size());
  predicted.reserve(test.vectors.size());
  for (const ErrorVector& v : test.vectors) {
    truth.push_back(v.label);
    predicted.push_back(classify(model, v.errors).label);
  }
  return confusion(truth, predicted);
}

}  // namespace tsad
