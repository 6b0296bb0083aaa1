#include "tsad/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tsad/error.hpp"
#include "tsad/rng.hpp"

namespace tsad {

void TimeSeries::validate() const {
  if (values.empty()) fail(ErrorCode::EmptyDataset, "series '" + name + "' has no values");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]))
      fail(ErrorCode::InvalidArgument,
           "series '" + name + "' has a non-finite value at index " + std::to_string(i));
  }
  if (!(sample_interval_s > 0.0))
    fail(ErrorCode::InvalidArgument, "series '" + name + "' has non-positive sample interval");
}

TimeSeries downsample(const TimeSeries& series, std::size_t factor) {
  series.validate();
  if (factor == 0) fail(ErrorCode::InvalidFactor, "downsample factor must be >= 1");
  if (factor > series.values.size())
    fail(ErrorCode::InvalidFactor, "downsample factor " + std::to_string(factor) +
                                       " exceeds series length " +
                                       std::to_string(series.values.size()));
  TimeSeries out;
  out.name = series.name;
  out.sample_interval_s = series.sample_interval_s * static_cast<double>(factor);
  const std::size_t blocks = series.values.size() / factor;
  out.values.reserve(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    double sum = 0.0;
    for (std::size_t j = 0; j < factor; ++j) sum += series.values[b * factor + j];
    out.values.push_back(sum / static_cast<double>(factor));
  }
  return out;
}

std::pair<TimeSeries, NormalizationParams> minmax_normalize(const TimeSeries& series) {
  series.validate();
  const auto [lo_it, hi_it] = std::minmax_element(series.values.begin(), series.values.end());
  NormalizationParams params{*lo_it, *hi_it};
  if (!(params.max > params.min))
    fail(ErrorCode::DegenerateRange, "constant series cannot be min-max normalized");
  TimeSeries out = series;
  const double range = params.max - params.min;
  for (double& v : out.values) v = (v - params.min) / range;
  return {std::move(out), params};
}

TimeSeries denormalize(const TimeSeries& series, const NormalizationParams& params) {
  series.validate();
  if (!(params.max > params.min))
    fail(ErrorCode::DegenerateRange, "normalization params have max <= min");
  TimeSeries out = series;
  const double range = params.max - params.min;
  for (double& v : out.values) v = v * range + params.min;
  return out;
}

double acf(const TimeSeries& series, std::size_t lag) {
  series.validate();
  const auto& x = series.values;
  const std::size_t n = x.size();
  if (lag >= n)
    fail(ErrorCode::InvalidLag,
         "lag " + std::to_string(lag) + " >= series length " + std::to_string(n));
  if (lag == 0) return 1.0;

  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);

  double denom = 0.0;
  for (double v : x) denom += (v - mean) * (v - mean);
  if (denom == 0.0) fail(ErrorCode::DegenerateRange, "zero-variance series has no autocorrelation");

  double num = 0.0;
  for (std::size_t t = 0; t + lag < n; ++t) num += (x[t] - mean) * (x[t + lag] - mean);
  return num / denom;
}

std::vector<Window> make_windows(const TimeSeries& series, std::size_t window_len,
                                 std::size_t stride) {
  series.validate();
  if (window_len < 2) fail(ErrorCode::InvalidWindow, "window length must be >= 2");
  if (stride == 0) fail(ErrorCode::InvalidWindow, "stride must be >= 1");
  if (window_len > series.values.size())
    fail(ErrorCode::InvalidWindow, "window length " + std::to_string(window_len) +
                                       " exceeds series length " +
                                       std::to_string(series.values.size()));
  const std::size_t count = (series.values.size() - window_len) / stride + 1;
  std::vector<Window> windows;
  windows.reserve(count);
  for (std::size_t w = 0; w < count; ++w) {
    Window win;
    win.source_offset = w * stride;
    win.points.assign(series.values.begin() + static_cast<std::ptrdiff_t>(win.source_offset),
                      series.values.begin() +
                          static_cast<std::ptrdiff_t>(win.source_offset + window_len));
    windows.push_back(std::move(win));
  }
  return windows;
}

DatasetSplit split_dataset(std::vector<Window> normal, std::vector<Window> abnormal,
                           const SplitRatios& ratios, std::uint64_t seed) {
  if (normal.empty()) fail(ErrorCode::EmptyDataset, "no normal windows to split");
  if (ratios.train < 0.0 || ratios.valid < 0.0 || ratios.test < 0.0 ||
      std::abs(ratios.train + ratios.valid + ratios.test - 1.0) > 1e-9)
    fail(ErrorCode::InvalidArgument, "split ratios must be nonnegative and sum to 1");

  Rng rng(seed);
  rng.shuffle(normal);

  const std::size_t n = normal.size();
  std::size_t n_train = static_cast<std::size_t>(std::floor(ratios.train * static_cast<double>(n)));
  const std::size_t n_valid =
      static_cast<std::size_t>(std::floor(ratios.valid * static_cast<double>(n)));
  const std::size_t n_test =
      static_cast<std::size_t>(std::floor(ratios.test * static_cast<double>(n)));
  n_train += n - (n_train + n_valid + n_test);  // remainder goes to train

  DatasetSplit split;
  auto take = [&](std::size_t from, std::size_t count) {
    std::vector<Window> out(normal.begin() + static_cast<std::ptrdiff_t>(from),
                            normal.begin() + static_cast<std::ptrdiff_t>(from + count));
    for (Window& w : out) w.label = 0;
    return out;
  };
  split.normal_train = take(0, n_train);
  split.normal_valid = take(n_train, n_valid);
  split.normal_test = take(n_train + n_valid, n_test);
  split.abnormal_test = std::move(abnormal);
  for (Window& w : split.abnormal_test) w.label = 1;
  return split;
}

NormalizationParams fit_normalization(const std::vector<Window>& windows) {
  if (windows.empty()) fail(ErrorCode::EmptyDataset, "no windows to fit normalization on");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const Window& w : windows) {
    for (double v : w.points) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(hi > lo)) fail(ErrorCode::DegenerateRange, "windows have zero value range");
  return NormalizationParams{lo, hi};
}

Window normalize_window(const Window& window, const NormalizationParams& params) {
  if (!(params.max > params.min))
    fail(ErrorCode::DegenerateRange, "normalization params have max <= min");
  Window out = window;
  const double range = params.max - params.min;
  for (double& v : out.points) {
    v = (v - params.min) / range;
    v = std::clamp(v, 0.0, 1.0);
  }
  return out;
}

void normalize_split(DatasetSplit& split, const NormalizationParams& params) {
  for (auto* part :
       {&split.normal_train, &split.normal_valid, &split.normal_test, &split.abnormal_test}) {
    for (Window& w : *part) w = normalize_window(w, params);
  }
}

TimeSeries concat_windows(const std::vector<Window>& windows, double sample_interval_s) {
  TimeSeries out;
  out.sample_interval_s = sample_interval_s;
  for (const Window& w : windows)
    out.values.insert(out.values.end(), w.points.begin(), w.points.end());
  return out;
}

}  // namespace tsad
