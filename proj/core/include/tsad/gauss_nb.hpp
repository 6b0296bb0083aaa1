#ifndef TSAD_GAUSS_NB_HPP
#define TSAD_GAUSS_NB_HPP

#include <Eigen/Dense>
#include <vector>

#include "tsad/lstm.hpp"
#include "tsad/metrics.hpp"

namespace tsad {

enum class SplitTag { train, test };

struct ErrorDataset {
  std::vector<ErrorVector> vectors;
  SplitTag tag = SplitTag::train;

  Eigen::Index dim() const {
    return vectors.empty() ? 0 : static_cast<Eigen::Index>(vectors.front().errors.size());
  }
  void validate() const;  // uniform dimensionality, labels in {0,1}
};

// Bernoulli class prior plus one Gaussian per class per attribute. Row 0 of
// mean/variance is the normal class, row 1 the abnormal class.
struct GaussNBModel {
  double prior_abnormal = 0.5;
  Eigen::MatrixXd mean;      // 2 x d
  Eigen::MatrixXd variance;  // 2 x d, every entry >= variance_floor
  double variance_floor = 1e-9;

  Eigen::Index dim() const { return mean.cols(); }
};

// Maximum-likelihood fit: prior = abnormal fraction, per-class sample means,
// per-class variances with denominator n_c, floored at variance_floor.
GaussNBModel fit_nb(const ErrorDataset& train, double variance_floor = 1e-9);

// ln P(y=c) + sum_j [ -0.5 ln(2 pi var[c][j]) - (x_j - mean[c][j])^2 / (2 var[c][j]) ]
double joint_log_likelihood(const GaussNBModel& model, const std::vector<double>& x, int label);

struct Classification {
  int label = 0;
  double posterior_abnormal = 0.0;
};

// Posterior via log-sum-exp over the two joint log-likelihoods; exact ties
// resolve to abnormal.
Classification classify(const GaussNBModel& model, const std::vector<double>& x);

ConfusionCounts evaluate_nb(const GaussNBModel& model, const ErrorDataset& test);

}  // namespace tsad

#endif  // TSAD_GAUSS_NB_HPP
