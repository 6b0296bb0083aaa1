#ifndef TSAD_PIPELINE_HPP
#define TSAD_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "tsad/baselines.hpp"
#include "tsad/config.hpp"
#include "tsad/gauss_nb.hpp"
#include "tsad/lstm.hpp"
#include "tsad/metrics.hpp"
#include "tsad/synth.hpp"

namespace tsad {

struct MethodResult {
  std::string method;
  ConfusionCounts counts;
  MetricReport metrics;
};

struct ExperimentReport {
  std::string dataset_name;
  std::uint64_t seed = 0;
  std::string config_echo;
  std::vector<MethodResult> methods;  // LSTM-Gauss-NBayes, LSTM NN, MLP, in that order
  std::vector<EpochLoss> predictor_history;
  std::vector<EpochLoss> classifier_history;
  std::vector<EpochLoss> mlp_history;
  StackedLstmParams predictor;
  LstmClassifierParams classifier;
  MlpParams mlp;
  GaussNBModel nb;
  // Wall-clock seconds per stage. Printed, never written to artifact files,
  // so repeated runs stay byte-identical.
  std::vector<std::pair<std::string, double>> runtimes;
};

// The full protocol: acquire -> split -> normalize -> train predictor ->
// error vectors -> stratified error split -> fit NB -> train baselines ->
// evaluate all three methods on the shared held-out windows. Errors from any
// stage carry a "stage=<name>:" prefix.
ExperimentReport run_experiment(const ExperimentConfig& config);

// Seed streams derived from the master seed, one per stochastic stage, so
// changing e.g. the generator draw count cannot shift the split. The stage
// commands reuse them, which keeps their artifacts identical to a full run's.
enum class SeedStream : std::uint64_t {
  generator = 1,
  split = 2,
  predictor = 3,
  error_split = 4,
  baseline_split = 5,
  classifier = 6,
  mlp = 7,
  cv_shuffle = 8,
  cv_train = 9,
};
std::uint64_t stage_seed(std::uint64_t master_seed, SeedStream stream);

// acquire -> split -> normalize, exactly the first three run_experiment
// stages. When given, `params_out` receives the training-set normalization.
DatasetSplit prepare_split(const ExperimentConfig& config,
                           NormalizationParams* params_out = nullptr);

// Stratified index split over [0, labels.size()): a seeded per-class shuffle,
// then `ratio` of each class into `first`, the rest into `second`; within each
// part class 0 precedes class 1.
void stratified_split_indices(const std::vector<int>& labels, double ratio, std::uint64_t seed,
                              std::vector<std::size_t>& first, std::vector<std::size_t>& second);

// The predictor stage's hyperparameters for this config, including its seed.
TrainConfig predictor_train_config(const ExperimentConfig& config);

enum class CvTask { predictor, lstm_classifier, mlp };

struct CvResult {
  TrainConfig best;
  std::vector<double> fold_scores;  // per-fold scores of the winning combination
  double mean_score = 0.0;
};

// K-fold selection over the grid in `config` (empty grids pin the scalar
// value). Predictors score by held-out one-step MSE, classifiers by held-out
// cross-entropy; ties keep the earlier grid entry.
CvResult crossval_select(const std::vector<Window>& windows, const ExperimentConfig& config,
                         CvTask task);

// Writes report.txt, metrics.csv and one loss-history CSV per trained model.
void emit_report(const ExperimentReport& report, const std::filesystem::path& out_dir);

// epoch,train_loss,valid_loss rows, exact decimal encoding.
void write_loss_history_csv(const std::filesystem::path& path,
                            const std::vector<EpochLoss>& history);

// Stage artifact of the `errors` command: header window,label,e1..ed, one row
// per error vector, exact decimal encoding.
void write_errors_csv(const std::filesystem::path& path, const std::vector<ErrorVector>& vectors);
std::vector<ErrorVector> read_errors_csv(const std::filesystem::path& path);

// Archetype windows from the generator, or CSV series windowed and labeled.
std::vector<Window> acquire_windows(const ExperimentConfig& config);

// ExperimentConfig overrides applied over the archetype's generator defaults.
GeneratorConfig generator_config(const ExperimentConfig& config);

double archetype_interval_s(const std::string& archetype);

}  // namespace tsad

#endif  // TSAD_PIPELINE_HPP
