#ifndef TSAD_METRICS_HPP
#define TSAD_METRICS_HPP

#include <cstdint>
#include <vector>

namespace tsad {

// Abnormal (label 1) is the positive class throughout.
struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  std::int64_t total() const { return tp + fp + tn + fn; }
};

struct MetricReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f_beta = 0.0;
  double beta = 1.0;
};

ConfusionCounts confusion(const std::vector<int>& truth, const std::vector<int>& predicted);

// accuracy = (tp+tn)/total; precision = tp/(tp+fp) (0 when tp+fp = 0);
// recall = tp/(tp+fn) (0 when tp+fn = 0);
// F_beta = (1+b^2)PR/(b^2 P + R), 0 when P = R = 0.
MetricReport compute_metrics(const ConfusionCounts& counts, double beta = 1.0);

}  // namespace tsad

#endif  // TSAD_METRICS_HPP
