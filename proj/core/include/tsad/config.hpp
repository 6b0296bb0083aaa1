#ifndef TSAD_CONFIG_HPP
#define TSAD_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tsad {

// Flat key/value experiment configuration. Every key is optional in the file
// and falls back to the defaults below; unknown keys are hard errors so typos
// cannot silently change a run. Generator knobs left unset inherit the
// archetype defaults.
struct ExperimentConfig {
  // data source: a generator archetype ("power", "loop", "land") or CSV paths
  std::string archetype = "power";
  std::string series_csv;
  std::string labels_csv;

  // generator
  std::size_t n_normal = 500;
  std::size_t n_abnormal = 60;
  std::optional<double> noise_sigma;
  std::optional<double> anomaly_amplitude;

  // preprocessing
  std::size_t downsample_factor = 1;
  std::size_t window_len = 0;  // 0: archetype default; required for CSV input
  std::size_t stride = 0;      // 0: non-overlapping (stride = window_len)
  double train_ratio = 0.8;
  double valid_ratio = 0.1;
  double test_ratio = 0.1;
  double error_split_ratio = 0.8;  // share of error vectors used to fit the classifier

  // predictor training
  int hidden = 8;
  double learning_rate = 0.05;
  int epochs = 60;
  double dropout = 0.0;
  double l2 = 1e-4;

  // baselines
  int classifier_hidden = 8;
  int classifier_epochs = 60;
  int mlp_epochs = 200;
  double classifier_dropout = 0.0;

  // evaluation
  double beta = 1.0;

  // cross-validation (used by the cv command; empty grids mean "fixed value")
  int cv_folds = 5;
  int cv_epochs = 200;
  std::vector<int> hidden_grid;
  std::vector<double> learning_rate_grid;
  std::vector<double> dropout_grid;
  std::vector<double> l2_grid;

  std::uint64_t seed = 0;
  std::string out_dir;

  void validate() const;
};

ExperimentConfig parse_config(const std::string& text, const std::string& source_name);
ExperimentConfig load_config(const std::filesystem::path& path);

// Deterministic "key = value" echo of every field, one per line, for reports.
std::string describe_config(const ExperimentConfig& config);

}  // namespace tsad

#endif  // TSAD_CONFIG_HPP
