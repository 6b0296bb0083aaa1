#include "tsad/metrics.hpp"

#include "tsad/error.hpp"

namespace tsad {

ConfusionCounts confusion(const std::vector<int>& truth, const std::vector<int>& predicted) {
  if (truth.size() != predicted.size())
    fail(ErrorCode::ShapeError, "truth and prediction lists differ in length");
  if (truth.empty()) fail(ErrorCode::EmptyDataset, "no samples to tally");
  ConfusionCounts counts;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    const int y = truth[k];
    const int p = predicted[k];
    if ((y != 0 && y != 1) || (p != 0 && p != 1))
      fail(ErrorCode::InvalidArgument, "labels must be 0 or 1");
    if (y == 1)
      (p == 1 ? counts.tp : counts.fn) += 1;
    else
      (p == 1 ? counts.fp : counts.tn) += 1;
  }
  return counts;
}

MetricReport compute_metrics(const ConfusionCounts& counts, double beta) {
  if (beta <= 0.0) fail(ErrorCode::InvalidBeta, "beta must be positive");
  const std::int64_t total = counts.total();
  if (total <= 0) fail(ErrorCode::EmptyDataset, "confusion counts are empty");

  MetricReport report;
  report.beta = beta;
  report.accuracy = static_cast<double>(counts.tp + counts.tn) / static_cast<double>(total);
  const std::int64_t predicted_pos = counts.tp + counts.fp;
  const std::int64_t actual_pos = counts.tp + counts.fn;
  report.precision =
      predicted_pos > 0 ? static_cast<double>(counts.tp) / static_cast<double>(predicted_pos)
                        : 0.0;
  report.recall =
      actual_pos > 0 ? static_cast<double>(counts.tp) / static_cast<double>(actual_pos) : 0.0;
  const double b2 = beta * beta;
  const double denom = b2 * report.precision + report.recall;
  report.f_beta =
      denom > 0.0 ? (1.0 + b2) * report.precision * report.recall / denom : 0.0;
  return report;
}

}  // namespace tsad
