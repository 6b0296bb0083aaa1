#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "tsad/error.hpp"
#include "tsad/gauss_nb.hpp"
#include "tsad/rng.hpp"

using namespace tsad;

namespace {

ErrorDataset tiny_dataset() {
  // hand-checkable: class 0 = {(1,2),(3,4)}, class 1 = {(10,0),(14,2),(12,4)}
  ErrorDataset data;
  data.vectors = {
      {{1.0, 2.0}, 0, 0}, {{3.0, 4.0}, 0, 1},
      {{10.0, 0.0}, 1, 2}, {{14.0, 2.0}, 1, 3}, {{12.0, 4.0}, 1, 4},
  };
  return data;
}

}  // namespace

TEST_CASE("fit_nb computes the maximum-likelihood estimates") {
  const GaussNBModel m = fit_nb(tiny_dataset());
  CHECK(m.prior_abnormal == doctest::Approx(3.0 / 5.0).epsilon(1e-15));
  CHECK(m.mean(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(m.mean(0, 1) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(m.mean(1, 0) == doctest::Approx(12.0).epsilon(1e-15));
  CHECK(m.mean(1, 1) == doctest::Approx(2.0).epsilon(1e-15));
  // population variances (denominator n_c)
  CHECK(m.variance(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.variance(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.variance(1, 0) == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
  CHECK(m.variance(1, 1) == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("fit_nb floors degenerate variances") {
  ErrorDataset data;
  data.vectors = {{{5.0, 1.0}, 0, 0}, {{5.0, 2.0}, 0, 1}, {{7.0, 3.0}, 1, 2}, {{7.0, 4.0}, 1, 3}};
  const GaussNBModel m = fit_nb(data, 1e-6);
  CHECK(m.variance(0, 0) == 1e-6);  // constant attribute within the class
  CHECK(m.variance(1, 0) == 1e-6);
  CHECK(m.variance(0, 1) == doctest::Approx(0.25));
  CHECK_THROWS_AS(fit_nb(data, 0.0), Error);
}

TEST_CASE("fit_nb requires both classes and consistent shapes") {
  ErrorDataset one_class;
  one_class.vectors = {{{1.0}, 0, 0}, {{2.0}, 0, 1}};
  try {
    fit_nb(one_class);
    FAIL("expected MissingClass");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingClass);
  }

  ErrorDataset ragged;
  ragged.vectors = {{{1.0, 2.0}, 0, 0}, {{3.0}, 1, 1}};
  CHECK_THROWS_AS(fit_nb(ragged), Error);

  ErrorDataset bad_label;
  bad_label.vectors = {{{1.0}, 2, 0}};
  CHECK_THROWS_AS(bad_label.validate(), Error);

  ErrorDataset empty_features;
  empty_features.vectors = {{{}, 0, 0}, {{}, 1, 1}};
  try {
    fit_nb(empty_features);
    FAIL("expected EmptyFeatures");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyFeatures);
  }
}

TEST_CASE("joint_log_likelihood matches the written-out density sum") {
  const GaussNBModel m = fit_nb(tiny_dataset());
  const std::vector<double> x{4.0, 1.5};
  for (int label : {0, 1}) {
    const double prior = label == 1 ? m.prior_abnormal : 1.0 - m.prior_abnormal;
    double expect = std::log(prior);
    for (int j = 0; j < 2; ++j) {
      const double var = m.variance(label, j);
      const double dev = x[static_cast<std::size_t>(j)] - m.mean(label, j);
      expect += -0.5 * std::log(2.0 * std::numbers::pi * var) - dev * dev / (2.0 * var);
    }
    CHECK(joint_log_likelihood(m, x, label) == doctest::Approx(expect).epsilon(1e-14));
  }
  CHECK_THROWS_AS(joint_log_likelihood(m, {1.0}, 0), Error);
  CHECK_THROWS_AS(joint_log_likelihood(m, x, 2), Error);
}

TEST_CASE("classify matches an unnormalized product-form oracle") {
  Rng rng(12);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t d = 1 + rng.index(4);
    ErrorDataset data;
    for (int n = 0; n < 30; ++n) {
      ErrorVector v;
      v.label = n < 12 ? 0 : 1;
      const double shift = v.label == 1 ? 2.0 : 0.0;
      for (std::size_t j = 0; j < d; ++j) v.errors.push_back(rng.normal(shift, 1.0));
      data.vectors.push_back(std::move(v));
    }
    const GaussNBModel m = fit_nb(data);

    std::vector<double> x;
    for (std::size_t j = 0; j < d; ++j) x.push_back(rng.normal(1.0, 2.0));

    // plain product of densities, normalized at the end
    auto product = [&](int label) {
      double p = label == 1 ? m.prior_abnormal : 1.0 - m.prior_abnormal;
      for (std::size_t j = 0; j < d; ++j) {
        const double var = m.variance(label, static_cast<Eigen::Index>(j));
        const double dev = x[j] - m.mean(label, static_cast<Eigen::Index>(j));
        p *= std::exp(-dev * dev / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
      }
      return p;
    };
    const double p0 = product(0);
    const double p1 = product(1);
    const Classification got = classify(m, x);
    const double expect = p1 / (p0 + p1);
    CHECK(std::abs(got.posterior_abnormal - expect) <=
          1e-9 * std::max({std::abs(expect), std::abs(got.posterior_abnormal), 1e-300}));
    CHECK(got.label == (p1 >= p0 ? 1 : 0));
  }
}

TEST_CASE("classify resolves exact posterior ties to abnormal") {
  GaussNBModel m;
  m.prior_abnormal = 0.5;
  m.mean.resize(2, 1);
  m.mean << -1.0, 1.0;
  m.variance = Eigen::MatrixXd::Constant(2, 1, 1.0);
  const Classification mid = classify(m, {0.0});  // equidistant from both means
  CHECK(mid.posterior_abnormal == doctest::Approx(0.5));
  CHECK(mid.label == 1);
  CHECK(classify(m, {-0.1}).label == 0);
  CHECK(classify(m, {0.1}).label == 1);
}

TEST_CASE("evaluate_nb tallies the confusion counts over a test set") {
  const GaussNBModel m = fit_nb(tiny_dataset());
  ErrorDataset test;
  test.tag = SplitTag::test;
  test.vectors = {
      {{2.0, 3.0}, 0, 0},   // near class 0: tn
      {{12.0, 2.0}, 1, 1},  // near class 1: tp
      {{2.5, 3.5}, 1, 2},   // near class 0 but labeled 1: fn
      {{11.0, 1.0}, 0, 3},  // near class 1 but labeled 0: fp
  };
  const ConfusionCounts counts = evaluate_nb(m, test);
  CHECK(counts.tp == 1);
  CHECK(counts.tn == 1);
  CHECK(counts.fn == 1);
  CHECK(counts.fp == 1);
  CHECK_THROWS_AS(evaluate_nb(m, ErrorDataset{}), Error);
}
