#ifndef TSAD_TIMESERIES_HPP
#define TSAD_TIMESERIES_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tsad {

/// Raw scalar sequence with sampling-interval metadata.
struct TimeSeries {
  std::vector<double> values;
  double sample_interval_s = 1.0;
  std::string name;

  /// Throws if the series is empty, non-finite, or has a non-positive interval.
  void validate() const;
};

struct NormalizationParams {
  double min = 0.0;
  double max = 1.0;
};

/// Fixed-length subsequence; the unit of training and scoring.
/// Labels: 0 = normal, 1 = abnormal, unset = unlabeled.
struct Window {
  std::vector<double> points;
  std::optional<int> label;
  std::size_t source_offset = 0;
};

struct DatasetSplit {
  std::vector<Window> normal_train;
  std::vector<Window> normal_valid;
  std::vector<Window> normal_test;
  std::vector<Window> abnormal_test;
};

struct SplitRatios {
  double train = 0.8;
  double valid = 0.1;
  double test = 0.1;
};

/// Non-overlapping block means; the trailing partial block is discarded and the
/// sampling interval grows by the factor.
TimeSeries downsample(const TimeSeries& series, std::size_t factor);

/// Maps min -> 0 and max -> 1. Throws DegenerateRange on a constant series.
std::pair<TimeSeries, NormalizationParams> minmax_normalize(const TimeSeries& series);

TimeSeries denormalize(const TimeSeries& series, const NormalizationParams& params);

/// Sample autocorrelation at the given lag:
///   r_k = sum_{t=0..n-k-1} (x_t - m)(x_{t+k} - m) / sum_t (x_t - m)^2
/// with m the full-series mean. r_0 is exactly 1.
double acf(const TimeSeries& series, std::size_t lag);

/// Windows start at offsets 0, stride, 2*stride, ...; labels are left unset.
std::vector<Window> make_windows(const TimeSeries& series, std::size_t window_len,
                                 std::size_t stride);

/// Shuffles the normal windows with the seeded generator and partitions them
/// train/valid/test (sizes floored, remainder to train). All abnormal windows
/// land in abnormal_test. Labels are stamped 0/1 on the way through.
DatasetSplit split_dataset(std::vector<Window> normal, std::vector<Window> abnormal,
                           const SplitRatios& ratios, std::uint64_t seed);

/// Min/max over every point of the given windows (typically the training set,
/// so held-out data cannot leak into the scaling).
NormalizationParams fit_normalization(const std::vector<Window>& windows);

/// Applies (x - min)/(max - min); out-of-range results are clamped to [0, 1].
Window normalize_window(const Window& window, const NormalizationParams& params);

/// Normalizes all four partitions in place with the same parameters.
void normalize_split(DatasetSplit& split, const NormalizationParams& params);

/// Back-to-back concatenation of equal-length windows into one series.
TimeSeries concat_windows(const std::vector<Window>& windows, double sample_interval_s = 1.0);

}  // namespace tsad

#endif  // TSAD_TIMESERIES_HPP
