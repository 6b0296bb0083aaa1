// tsad: anomaly-detection experiment pipeline for scalar sensor series.
//
// A stacked-LSTM one-step predictor is trained on normal windows only; its
// per-step prediction errors feed a Gaussian naive Bayes classifier that
// labels held-out windows normal/abnormal. `run` executes the whole protocol
// and writes every artifact; the other subcommands expose the stages one at a
// time and, given the same config and seed, reproduce the run's intermediate
// results exactly.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tsad/baselines.hpp"
#include "tsad/config.hpp"
#include "tsad/csv.hpp"
#include "tsad/error.hpp"
#include "tsad/gauss_nb.hpp"
#include "tsad/lstm.hpp"
#include "tsad/metrics.hpp"
#include "tsad/model_io.hpp"
#include "tsad/pipeline.hpp"
#include "tsad/rng.hpp"
#include "tsad/timeseries.hpp"

namespace fs = std::filesystem;

namespace {

struct GlobalArgs {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

tsad::ExperimentConfig effective_config(const GlobalArgs& args) {
  tsad::ExperimentConfig cfg;
  if (!args.config_path.empty()) cfg = tsad::load_config(args.config_path);
  if (args.seed_set) cfg.seed = args.seed;
  cfg.validate();
  return cfg;
}

// --out beats the config file, which beats the environment default.
fs::path resolve_out_dir(const GlobalArgs& args, const tsad::ExperimentConfig& cfg) {
  if (!args.out_dir.empty()) return args.out_dir;
  if (!cfg.out_dir.empty()) return cfg.out_dir;
  if (const char* env = std::getenv("TSAD_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return "out";
}

fs::path ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) tsad::fail(tsad::ErrorCode::IoError,
                     "cannot create '" + dir.string() + "': " + ec.message());
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) tsad::fail(tsad::ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) tsad::fail(tsad::ErrorCode::IoError, "failed writing " + path.string());
}

// Sample spacing of the data the windows came from, for stage artifacts that
// are series CSVs themselves.
double data_interval_s(const tsad::ExperimentConfig& cfg) {
  if (cfg.series_csv.empty()) return tsad::archetype_interval_s(cfg.archetype);
  return tsad::read_series_csv(cfg.series_csv).sample_interval_s *
         static_cast<double>(cfg.downsample_factor);
}

std::vector<tsad::Window> held_out_windows(const tsad::DatasetSplit& split) {
  std::vector<tsad::Window> held = split.normal_test;
  held.insert(held.end(), split.abnormal_test.begin(), split.abnormal_test.end());
  return held;
}

void print_metric_row(const char* method, const tsad::MetricReport& m) {
  std::printf("%-20s %9.3f %10.3f %7.3f %7.3f\n", method, m.accuracy, m.precision, m.recall,
              m.f_beta);
}

void print_metric_header() {
  std::printf("%-20s %9s %10s %7s %7s\n", "method", "accuracy", "precision", "recall", "f1");
}

int cmd_generate(const tsad::ExperimentConfig& cfg, const fs::path& out) {
  if (!cfg.series_csv.empty())
    tsad::fail(tsad::ErrorCode::InvalidArgument,
               "generate draws from an archetype; remove series_csv from the config");
  const std::vector<tsad::Window> windows = tsad::acquire_windows(cfg);
  std::vector<int> labels;
  labels.reserve(windows.size());
  std::size_t abnormal = 0;
  for (const tsad::Window& w : windows) {
    labels.push_back(w.label.value_or(0));
    abnormal += static_cast<std::size_t>(labels.back());
  }
  tsad::TimeSeries series =
      tsad::concat_windows(windows, tsad::archetype_interval_s(cfg.archetype));
  series.name = cfg.archetype;

  ensure_dir(out);
  tsad::write_series_csv(out / "series.csv", series);
  tsad::write_labels_csv(out / "labels.csv", labels);
  std::printf("generated %zu %s windows of length %zu (%zu normal, %zu abnormal)\n",
              windows.size(), cfg.archetype.c_str(), windows.front().points.size(),
              windows.size() - abnormal, abnormal);
  std::printf("wrote %s\n", (out / "series.csv").string().c_str());
  std::printf("wrote %s\n", (out / "labels.csv").string().c_str());
  return 0;
}

int cmd_preprocess(const tsad::ExperimentConfig& cfg, const fs::path& out) {
  tsad::NormalizationParams params;
  const tsad::DatasetSplit split = tsad::prepare_split(cfg, &params);
  const double interval = data_interval_s(cfg);

  ensure_dir(out);
  write_text(out / "normalization.txt", "min = " + tsad::format_double(params.min) +
                                            "\nmax = " + tsad::format_double(params.max) + "\n");
  const std::pair<const char*, const std::vector<tsad::Window>*> parts[] = {
      {"train.csv", &split.normal_train},
      {"valid.csv", &split.normal_valid},
      {"test.csv", &split.normal_test},
      {"abnormal.csv", &split.abnormal_test},
  };
  for (const auto& [name, windows] : parts) {
    if (windows->empty()) {
      std::printf("%-12s 0 windows (skipped)\n", name);
      continue;
    }
    tsad::write_series_csv(out / name, tsad::concat_windows(*windows, interval));
    std::printf("%-12s %zu windows of length %zu\n", name, windows->size(),
                windows->front().points.size());
  }
  std::printf("normalization min=%s max=%s -> %s\n", tsad::format_double(params.min).c_str(),
              tsad::format_double(params.max).c_str(),
              (out / "normalization.txt").string().c_str());
  return 0;
}

int cmd_train(const tsad::ExperimentConfig& cfg, const fs::path& out) {
  const tsad::DatasetSplit split = tsad::prepare_split(cfg);
  const tsad::TrainedPredictor trained =
      tsad::train_predictor(split, tsad::predictor_train_config(cfg));

  ensure_dir(out);
  tsad::save_model(trained.params, out / "predictor.json");
  tsad::write_loss_history_csv(out / "loss_history_predictor.csv", trained.history);
  if (!trained.history.empty()) {
    std::printf("trained %d epochs on %zu windows; best epoch %d (valid loss %s)\n",
                static_cast<int>(trained.history.size()), split.normal_train.size(),
                trained.best_epoch,
                tsad::format_double(
                    trained.history[static_cast<std::size_t>(trained.best_epoch)].valid)
                    .c_str());
  }
  std::printf("wrote %s\n", (out / "predictor.json").string().c_str());
  std::printf("wrote %s\n", (out / "loss_history_predictor.csv").string().c_str());
  return 0;
}

int cmd_errors(const tsad::ExperimentConfig& cfg, const fs::path& out,
               const std::string& model_path) {
  const tsad::DatasetSplit split = tsad::prepare_split(cfg);
  const tsad::StackedLstmParams predictor =
      model_path.empty()
          ? tsad::train_predictor(split, tsad::predictor_train_config(cfg)).params
          : tsad::load_predictor(model_path);

  const std::vector<tsad::Window> held = held_out_windows(split);
  if (held.empty())
    tsad::fail(tsad::ErrorCode::EmptyDataset, "no held-out windows; increase test_ratio");
  std::vector<tsad::ErrorVector> vectors;
  vectors.reserve(held.size());
  for (const tsad::Window& w : held) vectors.push_back(tsad::prediction_errors(predictor, w));

  ensure_dir(out);
  tsad::write_errors_csv(out / "errors.csv", vectors);
  std::printf("wrote %zu error vectors of dimension %zu to %s\n", vectors.size(),
              vectors.front().errors.size(), (out / "errors.csv").string().c_str());
  return 0;
}

int cmd_fit_nb(const tsad::ExperimentConfig& cfg, const fs::path& out,
               const std::string& errors_path) {
  const fs::path source = errors_path.empty() ? out / "errors.csv" : fs::path(errors_path);
  const std::vector<tsad::ErrorVector> vectors = tsad::read_errors_csv(source);

  std::vector<int> labels;
  labels.reserve(vectors.size());
  for (const tsad::ErrorVector& v : vectors) labels.push_back(v.label);
  std::vector<std::size_t> fit_idx;
  std::vector<std::size_t> eval_idx;
  tsad::stratified_split_indices(labels, cfg.error_split_ratio,
                                 tsad::stage_seed(cfg.seed, tsad::SeedStream::error_split),
                                 fit_idx, eval_idx);

  tsad::ErrorDataset fit_set{{}, tsad::SplitTag::train};
  fit_set.vectors.reserve(fit_idx.size());
  std::size_t abnormal = 0;
  for (std::size_t i : fit_idx) {
    fit_set.vectors.push_back(vectors[i]);
    abnormal += static_cast<std::size_t>(vectors[i].label);
  }
  const tsad::GaussNBModel model = tsad::fit_nb(fit_set);

  ensure_dir(out);
  tsad::save_model(model, out / "nb.json");
  std::printf("fitted on %zu of %zu error vectors (%zu abnormal); prior_abnormal=%s\n",
              fit_idx.size(), vectors.size(), abnormal,
              tsad::format_double(model.prior_abnormal).c_str());
  std::printf("wrote %s\n", (out / "nb.json").string().c_str());
  return 0;
}

int cmd_evaluate(const tsad::ExperimentConfig& cfg, const fs::path& out,
                 const std::string& errors_path, const std::string& model_path) {
  const fs::path source = errors_path.empty() ? out / "errors.csv" : fs::path(errors_path);
  const std::vector<tsad::ErrorVector> vectors = tsad::read_errors_csv(source);
  const tsad::GaussNBModel model =
      tsad::load_gauss_nb(model_path.empty() ? out / "nb.json" : fs::path(model_path));

  std::vector<int> labels;
  labels.reserve(vectors.size());
  for (const tsad::ErrorVector& v : vectors) labels.push_back(v.label);
  std::vector<std::size_t> fit_idx;
  std::vector<std::size_t> eval_idx;
  tsad::stratified_split_indices(labels, cfg.error_split_ratio,
                                 tsad::stage_seed(cfg.seed, tsad::SeedStream::error_split),
                                 fit_idx, eval_idx);

  tsad::ErrorDataset eval_set{{}, tsad::SplitTag::test};
  eval_set.vectors.reserve(eval_idx.size());
  for (std::size_t i : eval_idx) eval_set.vectors.push_back(vectors[i]);

  const tsad::ConfusionCounts counts = tsad::evaluate_nb(model, eval_set);
  const tsad::MetricReport metrics = tsad::compute_metrics(counts, cfg.beta);
  std::printf("evaluated %zu held-out error vectors\n", eval_set.vectors.size());
  std::printf("tp=%lld fp=%lld tn=%lld fn=%lld\n", static_cast<long long>(counts.tp),
              static_cast<long long>(counts.fp), static_cast<long long>(counts.tn),
              static_cast<long long>(counts.fn));
  print_metric_header();
  print_metric_row("LSTM-Gauss-NBayes", metrics);
  return 0;
}

int cmd_run(const tsad::ExperimentConfig& cfg, const fs::path& out) {
  const tsad::ExperimentReport report = tsad::run_experiment(cfg);

  ensure_dir(out);
  tsad::emit_report(report, out);
  tsad::save_model(report.predictor, out / "predictor.json");
  tsad::save_model(report.classifier, out / "classifier.json");
  tsad::save_model(report.mlp, out / "mlp.json");
  tsad::save_model(report.nb, out / "nb.json");

  for (const auto& [stage, seconds] : report.runtimes)
    std::fprintf(stderr, "stage=%s %.2fs\n", stage.c_str(), seconds);

  std::printf("dataset = %s\nseed = %llu\n\n", report.dataset_name.c_str(),
              static_cast<unsigned long long>(report.seed));
  print_metric_header();
  for (const tsad::MethodResult& m : report.methods)
    print_metric_row(m.method.c_str(), m.metrics);
  std::printf("\nartifacts in %s\n", out.string().c_str());
  return 0;
}

int cmd_acf(const tsad::ExperimentConfig& cfg, const std::string& series_path,
            std::size_t max_lag) {
  tsad::TimeSeries series;
  if (!series_path.empty()) {
    series = tsad::read_series_csv(series_path);
  } else if (!cfg.series_csv.empty()) {
    series = tsad::read_series_csv(cfg.series_csv);
  } else {
    // normal-only stream of the configured archetype
    std::vector<tsad::Window> normals;
    for (tsad::Window& w : tsad::acquire_windows(cfg))
      if (w.label.value_or(0) == 0) normals.push_back(std::move(w));
    if (normals.empty()) tsad::fail(tsad::ErrorCode::EmptyDataset, "no normal windows generated");
    series = tsad::concat_windows(normals, tsad::archetype_interval_s(cfg.archetype));
  }
  if (cfg.downsample_factor > 1) series = tsad::downsample(series, cfg.downsample_factor);

  std::printf("lag,acf\n");
  for (std::size_t lag = 0; lag <= max_lag; ++lag)
    std::printf("%zu,%s\n", lag, tsad::format_double(tsad::acf(series, lag)).c_str());
  return 0;
}

int cmd_cv(const tsad::ExperimentConfig& cfg, const std::string& task_name) {
  tsad::CvTask task;
  if (task_name == "predictor") task = tsad::CvTask::predictor;
  else if (task_name == "lstm-classifier") task = tsad::CvTask::lstm_classifier;
  else if (task_name == "mlp") task = tsad::CvTask::mlp;
  else
    tsad::fail(tsad::ErrorCode::InvalidArgument,
               "cv task must be predictor, lstm-classifier or mlp (got '" + task_name + "')");

  const tsad::DatasetSplit split = tsad::prepare_split(cfg);
  std::vector<tsad::Window> data;
  if (task == tsad::CvTask::predictor) {
    data = split.normal_train;
  } else {
    // the classifiers' training pool: normal train windows plus the abnormal
    // share that run_experiment's baseline stage would hand them
    const std::vector<tsad::Window> held = held_out_windows(split);
    std::vector<int> labels;
    for (const tsad::Window& w : held) labels.push_back(w.label.value_or(0));
    std::vector<std::size_t> fit_idx;
    std::vector<std::size_t> eval_idx;
    tsad::stratified_split_indices(labels, cfg.error_split_ratio,
                                   tsad::stage_seed(cfg.seed, tsad::SeedStream::error_split),
                                   fit_idx, eval_idx);
    std::vector<std::size_t> abnormal_fit;
    for (std::size_t i : fit_idx)
      if (labels[i] == 1) abnormal_fit.push_back(i);
    tsad::Rng rng(tsad::stage_seed(cfg.seed, tsad::SeedStream::baseline_split));
    rng.shuffle(abnormal_fit);
    const auto keep = static_cast<std::size_t>(cfg.error_split_ratio *
                                               static_cast<double>(abnormal_fit.size()));
    data = split.normal_train;
    for (std::size_t k = 0; k < keep; ++k) data.push_back(held[abnormal_fit[k]]);
  }

  const tsad::CvResult result = tsad::crossval_select(data, cfg, task);
  std::printf("task = %s over %zu windows, %d folds, %d epochs per fold\n", task_name.c_str(),
              data.size(), cfg.cv_folds, cfg.cv_epochs);
  std::printf("best: hidden=%lld learning_rate=%s dropout=%s l2=%s\n",
              static_cast<long long>(result.best.hidden),
              tsad::format_double(result.best.learning_rate).c_str(),
              tsad::format_double(result.best.dropout).c_str(),
              tsad::format_double(result.best.l2).c_str());
  std::printf("fold scores:");
  for (double s : result.fold_scores) std::printf(" %s", tsad::format_double(s).c_str());
  std::printf("\nmean score: %s\n", tsad::format_double(result.mean_score).c_str());
  return 0;
}

// Stage-tags any library error that escapes a subcommand without one.
int run_command(const char* name, const std::function<int()>& body) {
  try {
    return body();
  } catch (const tsad::Error& e) {
    if (e.message().rfind("stage=", 0) == 0) throw;
    throw tsad::Error(e.code(), "stage=" + std::string(name) + ": " + e.message());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LSTM prediction-error anomaly detection for scalar sensor series"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalArgs args;
  app.add_option("--config", args.config_path, "experiment config file (JSON)")
      ->check(CLI::ExistingFile);
  CLI::Option* seed_opt =
      app.add_option("--seed", args.seed, "master seed overriding the config");
  app.add_option("--out", args.out_dir,
                 "output directory (default: config out_dir, then $TSAD_OUT_DIR, then ./out)");

  CLI::App* generate =
      app.add_subcommand("generate", "write a labeled synthetic series for the archetype");
  CLI::App* preprocess =
      app.add_subcommand("preprocess", "split and normalize windows; write the partitions");
  CLI::App* train = app.add_subcommand("train", "train the LSTM predictor on normal windows");
  CLI::App* errors =
      app.add_subcommand("errors", "write prediction-error vectors for held-out windows");
  std::string errors_model;
  errors->add_option("--model", errors_model,
                     "saved predictor to reuse (default: retrain from the config)");
  CLI::App* fit_nb_cmd =
      app.add_subcommand("fit-nb", "fit the Gaussian naive Bayes detector on error vectors");
  std::string nb_errors_path;
  fit_nb_cmd->add_option("--errors", nb_errors_path,
                         "errors CSV to fit on (default: <out>/errors.csv)");
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "score the detector on the held-out error vectors");
  std::string eval_errors_path;
  std::string eval_model_path;
  evaluate->add_option("--errors", eval_errors_path,
                       "errors CSV to evaluate on (default: <out>/errors.csv)");
  evaluate->add_option("--model", eval_model_path,
                       "saved detector to score (default: <out>/nb.json)");
  CLI::App* run = app.add_subcommand("run", "full experiment: all methods, reports and models");
  CLI::App* acf_cmd = app.add_subcommand("acf", "print the autocorrelation of a series");
  std::string acf_series;
  std::size_t acf_max_lag = 10;
  acf_cmd->add_option("--series", acf_series, "series CSV (default: generated normal stream)")
      ->check(CLI::ExistingFile);
  acf_cmd->add_option("--max-lag", acf_max_lag, "largest lag to print (default 10)");
  CLI::App* cv =
      app.add_subcommand("cv", "5-fold cross-validation over the configured parameter grid");
  std::string cv_task = "predictor";
  cv->add_option("--task", cv_task, "predictor, lstm-classifier or mlp (default predictor)");

  CLI11_PARSE(app, argc, argv);
  args.seed_set = seed_opt->count() > 0;

  try {
    const tsad::ExperimentConfig cfg = effective_config(args);
    const fs::path out = resolve_out_dir(args, cfg);
    if (app.got_subcommand(generate))
      return run_command("generate", [&] { return cmd_generate(cfg, out); });
    if (app.got_subcommand(preprocess))
      return run_command("preprocess", [&] { return cmd_preprocess(cfg, out); });
    if (app.got_subcommand(train))
      return run_command("train", [&] { return cmd_train(cfg, out); });
    if (app.got_subcommand(errors))
      return run_command("errors", [&] { return cmd_errors(cfg, out, errors_model); });
    if (app.got_subcommand(fit_nb_cmd))
      return run_command("fit_nb", [&] { return cmd_fit_nb(cfg, out, nb_errors_path); });
    if (app.got_subcommand(evaluate))
      return run_command("evaluate",
                         [&] { return cmd_evaluate(cfg, out, eval_errors_path, eval_model_path); });
    if (app.got_subcommand(run)) return run_command("run", [&] { return cmd_run(cfg, out); });
    if (app.got_subcommand(acf_cmd))
      return run_command("acf", [&] { return cmd_acf(cfg, acf_series, acf_max_lag); });
    if (app.got_subcommand(cv)) return run_command("cv", [&] { return cmd_cv(cfg, cv_task); });
    std::cerr << "error: no subcommand selected\n";
    return 2;
  } catch (const tsad::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << '\n';
    return 2;
  }
}
