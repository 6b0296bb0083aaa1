#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "tsad/error.hpp"
#include "tsad/rng.hpp"
#include "tsad/timeseries.hpp"

using namespace tsad;

namespace {

TimeSeries random_series(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  TimeSeries s;
  s.sample_interval_s = 60.0;
  s.values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) s.values.push_back(rng.uniform(-5.0, 12.0));
  return s;
}

}  // namespace

TEST_CASE("validate rejects empty, non-finite and bad-interval series") {
  TimeSeries s;
  CHECK_THROWS_AS(s.validate(), Error);

  s.values = {1.0, std::nan("")};
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("non-finite"), Error);

  s.values = {1.0, 2.0};
  s.sample_interval_s = 0.0;
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("interval"), Error);

  s.sample_interval_s = 1.0;
  CHECK_NOTHROW(s.validate());
}

TEST_CASE("downsample matches an independently computed block mean") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const TimeSeries s = random_series(97, seed);
    for (std::size_t factor : {1u, 2u, 3u, 7u, 10u}) {
      const TimeSeries d = downsample(s, factor);
      const std::size_t blocks = s.values.size() / factor;
      REQUIRE(d.values.size() == blocks);
      CHECK(d.sample_interval_s == doctest::Approx(60.0 * static_cast<double>(factor)));
      for (std::size_t b = 0; b < blocks; ++b) {
        double mean = 0.0;
        for (std::size_t j = 0; j < factor; ++j) mean += s.values[b * factor + j];
        mean /= static_cast<double>(factor);
        CHECK(d.values[b] == doctest::Approx(mean).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("downsample rejects factor 0 and factors beyond the length") {
  const TimeSeries s = random_series(10, 1);
  CHECK_THROWS_AS(downsample(s, 0), Error);
  CHECK_THROWS_AS(downsample(s, 11), Error);
  CHECK(downsample(s, 10).values.size() == 1);
}

TEST_CASE("minmax_normalize attains both endpoints exactly") {
  const TimeSeries s = random_series(64, 2);
  const auto [normed, params] = minmax_normalize(s);
  const auto [lo, hi] = std::minmax_element(normed.values.begin(), normed.values.end());
  CHECK(*lo == 0.0);
  CHECK(*hi == 1.0);
  CHECK(params.min == *std::min_element(s.values.begin(), s.values.end()));
  CHECK(params.max == *std::max_element(s.values.begin(), s.values.end()));
}

TEST_CASE("denormalize inverts minmax_normalize within 1e-12") {
  const TimeSeries s = random_series(128, 3);
  const auto [normed, params] = minmax_normalize(s);
  const TimeSeries back = denormalize(normed, params);
  REQUIRE(back.values.size() == s.values.size());
  for (std::size_t i = 0; i < s.values.size(); ++i)
    CHECK(std::abs(back.values[i] - s.values[i]) <= 1e-12);
}

TEST_CASE("constant series cannot be normalized") {
  TimeSeries s;
  s.values.assign(20, 4.5);
  try {
    minmax_normalize(s);
    FAIL("expected DegenerateRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateRange);
  }
}

TEST_CASE("acf matches the definition computed with explicit loops") {
  const TimeSeries s = random_series(80, 4);
  const std::size_t n = s.values.size();
  double mean = 0.0;
  for (double v : s.values) mean += v;
  mean /= static_cast<double>(n);
  double denom = 0.0;
  for (double v : s.values) denom += (v - mean) * (v - mean);

  CHECK(acf(s, 0) == 1.0);
  for (std::size_t lag = 1; lag <= 12; ++lag) {
    double num = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t)
      num += (s.values[t] - mean) * (s.values[t + lag] - mean);
    CHECK(std::abs(acf(s, lag) - num / denom) <= 1e-12);
  }
}

TEST_CASE("acf rejects lags past the end and zero-variance series") {
  const TimeSeries s = random_series(10, 5);
  CHECK_THROWS_AS(acf(s, 10), Error);
  TimeSeries flat;
  flat.values.assign(10, 1.0);
  CHECK_THROWS_AS(acf(flat, 1), Error);
}

TEST_CASE("make_windows covers offsets by stride and drops the tail") {
  const TimeSeries s = random_series(25, 6);
  const std::vector<Window> windows = make_windows(s, 10, 5);
  REQUIRE(windows.size() == 4);  // offsets 0, 5, 10, 15
  for (std::size_t w = 0; w < windows.size(); ++w) {
    CHECK(windows[w].source_offset == w * 5);
    CHECK_FALSE(windows[w].label.has_value());
    REQUIRE(windows[w].points.size() == 10);
    for (std::size_t k = 0; k < 10; ++k) CHECK(windows[w].points[k] == s.values[w * 5 + k]);
  }
  CHECK_THROWS_AS(make_windows(s, 1, 1), Error);
  CHECK_THROWS_AS(make_windows(s, 26, 1), Error);
  CHECK_THROWS_AS(make_windows(s, 10, 0), Error);
}

TEST_CASE("split_dataset is a disjoint exhaustive partition with stamped labels") {
  std::vector<Window> normal;
  for (int i = 0; i < 43; ++i) {
    Window w;
    w.points = {static_cast<double>(i), 0.0};
    w.source_offset = static_cast<std::size_t>(i);
    normal.push_back(w);
  }
  std::vector<Window> abnormal;
  for (int i = 100; i < 107; ++i) {
    Window w;
    w.points = {static_cast<double>(i), 0.0};
    w.source_offset = static_cast<std::size_t>(i);
    abnormal.push_back(w);
  }

  const DatasetSplit split = split_dataset(normal, abnormal, SplitRatios{0.8, 0.1, 0.1}, 11);
  CHECK(split.normal_train.size() == 35);  // floor plus remainder
  CHECK(split.normal_valid.size() == 4);
  CHECK(split.normal_test.size() == 4);
  CHECK(split.abnormal_test.size() == 7);

  std::set<std::size_t> seen;
  for (const auto* part : {&split.normal_train, &split.normal_valid, &split.normal_test}) {
    for (const Window& w : *part) {
      CHECK(w.label == 0);
      CHECK(seen.insert(w.source_offset).second);  // disjoint
    }
  }
  CHECK(seen.size() == normal.size());  // exhaustive
  for (const Window& w : split.abnormal_test) CHECK(w.label == 1);

  const DatasetSplit again = split_dataset(normal, abnormal, SplitRatios{0.8, 0.1, 0.1}, 11);
  for (std::size_t i = 0; i < split.normal_train.size(); ++i)
    CHECK(again.normal_train[i].source_offset == split.normal_train[i].source_offset);
  const DatasetSplit other = split_dataset(normal, abnormal, SplitRatios{0.8, 0.1, 0.1}, 12);
  bool same = true;
  for (std::size_t i = 0; i < split.normal_train.size(); ++i)
    same = same && other.normal_train[i].source_offset == split.normal_train[i].source_offset;
  CHECK_FALSE(same);
}

TEST_CASE("split_dataset validates its inputs") {
  std::vector<Window> normal(5, Window{{1.0, 2.0}, {}, 0});
  CHECK_THROWS_AS(split_dataset({}, {}, SplitRatios{}, 0), Error);
  CHECK_THROWS_AS(split_dataset(normal, {}, SplitRatios{0.5, 0.1, 0.1}, 0), Error);
}

TEST_CASE("fit_normalization scans every point of the given windows only") {
  std::vector<Window> train{{{3.0, 9.0, 4.0}, 0, 0}, {{2.5, 8.0, 7.0}, 0, 1}};
  const NormalizationParams p = fit_normalization(train);
  CHECK(p.min == 2.5);
  CHECK(p.max == 9.0);
  CHECK_THROWS_AS(fit_normalization({}), Error);
  CHECK_THROWS_AS(fit_normalization({Window{{1.0, 1.0}, 0, 0}}), Error);
}

TEST_CASE("normalize_window maps into [0,1] and clamps out-of-range points") {
  const NormalizationParams p{2.0, 6.0};
  const Window w{{2.0, 6.0, 4.0, 0.0, 9.0}, 1, 3};
  const Window n = normalize_window(w, p);
  CHECK(n.points == std::vector<double>{0.0, 1.0, 0.5, 0.0, 1.0});
  CHECK(n.label == 1);
  CHECK(n.source_offset == 3);
}

TEST_CASE("normalize_split applies one parameter set to all partitions") {
  DatasetSplit split;
  split.normal_train = {Window{{0.0, 10.0}, 0, 0}};
  split.abnormal_test = {Window{{5.0, 20.0}, 1, 1}};
  normalize_split(split, NormalizationParams{0.0, 10.0});
  CHECK(split.normal_train[0].points == std::vector<double>{0.0, 1.0});
  CHECK(split.abnormal_test[0].points == std::vector<double>{0.5, 1.0});
}

TEST_CASE("concat_windows preserves order and sets the interval") {
  const std::vector<Window> ws{{{1.0, 2.0}, 0, 0}, {{3.0, 4.0}, 1, 1}};
  const TimeSeries s = concat_windows(ws, 30.0);
  CHECK(s.values == std::vector<double>{1.0, 2.0, 3.0, 4.0});
  CHECK(s.sample_interval_s == 30.0);
}

TEST_CASE("Rng streams are reproducible and shuffles are permutations") {
  Rng a(99);
  Rng b(99);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.uniform() == b.uniform());
    CHECK(a.normal() == b.normal());
  }
  Rng c(7);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(c.index(13) < 13);
  }
  std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7};
  Rng d(3);
  d.shuffle(v);
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("mix_seed separates streams") {
  CHECK(mix_seed(0, 1) != mix_seed(0, 2));
  CHECK(mix_seed(1, 1) != mix_seed(2, 1));
  CHECK(mix_seed(42, 3) == mix_seed(42, 3));
}
