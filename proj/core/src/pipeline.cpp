#include "tsad/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <type_traits>
#include <utility>

#include "tsad/csv.hpp"
#include "tsad/error.hpp"
#include "tsad/neural.hpp"

namespace tsad {
namespace {

template <typename Fn>
auto run_stage(ExperimentReport& report, const std::string& name, Fn&& fn)
    -> decltype(fn()) {
  const auto start = std::chrono::steady_clock::now();
  try {
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      report.runtimes.emplace_back(
          name, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    } else {
      auto result = fn();
      report.runtimes.emplace_back(
          name, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
      return result;
    }
  } catch (const Error& e) {
    fail(e.code(), "stage=" + name + ": " + e.message());
  }
}

int required_label(const Window& window) {
  if (!window.label.has_value() || (*window.label != 0 && *window.label != 1)) {
    fail(ErrorCode::InvalidArgument, "window labels must be 0 or 1");
  }
  return *window.label;
}

// Partition raw windows by label and hand the normal ones to the seeded
// 80/10/10 shuffle-split; shared by run_experiment and prepare_split.
DatasetSplit split_windows(const std::vector<Window>& windows, const ExperimentConfig& config) {
  std::vector<Window> normal;
  std::vector<Window> abnormal;
  for (const Window& w : windows) {
    (w.label.value_or(0) == 1 ? abnormal : normal).push_back(w);
  }
  if (normal.empty()) fail(ErrorCode::EmptyDataset, "no normal windows to train on");
  return split_dataset(std::move(normal), std::move(abnormal),
                       SplitRatios{config.train_ratio, config.valid_ratio, config.test_ratio},
                       stage_seed(config.seed, SeedStream::split));
}

std::string three_decimals(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) fail(ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

MethodResult make_result(std::string method, const ConfusionCounts& counts, double beta) {
  MethodResult result;
  result.method = std::move(method);
  result.counts = counts;
  result.metrics = compute_metrics(counts, beta);
  return result;
}

}  // namespace

std::uint64_t stage_seed(std::uint64_t master_seed, SeedStream stream) {
  return mix_seed(master_seed, static_cast<std::uint64_t>(stream));
}

void stratified_split_indices(const std::vector<int>& labels, double ratio, std::uint64_t seed,
                              std::vector<std::size_t>& first, std::vector<std::size_t>& second) {
  first.clear();
  second.clear();
  Rng rng(seed);
  for (int cls : {0, 1}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) members.push_back(i);
    }
    rng.shuffle(members);
    const auto keep = static_cast<std::size_t>(ratio * static_cast<double>(members.size()));
    first.insert(first.end(), members.begin(), members.begin() + keep);
    second.insert(second.end(), members.begin() + keep, members.end());
  }
}

TrainConfig predictor_train_config(const ExperimentConfig& config) {
  TrainConfig tc;
  tc.hidden = config.hidden;
  tc.learning_rate = config.learning_rate;
  tc.epochs = config.epochs;
  tc.dropout = config.dropout;
  tc.l2 = config.l2;
  tc.seed = stage_seed(config.seed, SeedStream::predictor);
  return tc;
}

DatasetSplit prepare_split(const ExperimentConfig& config, NormalizationParams* params_out) {
  config.validate();
  DatasetSplit split = split_windows(acquire_windows(config), config);
  const NormalizationParams params = fit_normalization(split.normal_train);
  normalize_split(split, params);
  if (params_out != nullptr) *params_out = params;
  return split;
}

GeneratorConfig generator_config(const ExperimentConfig& config) {
  GeneratorConfig gen;
  if (config.archetype == "power") {
    gen = power_defaults();
  } else if (config.archetype == "loop") {
    gen = loop_defaults();
  } else if (config.archetype == "land") {
    gen = land_defaults();
  } else {
    fail(ErrorCode::InvalidArgument, "unknown archetype '" + config.archetype + "'");
  }
  gen.n_normal = config.n_normal;
  gen.n_abnormal = config.n_abnormal;
  gen.seed = stage_seed(config.seed, SeedStream::generator);
  if (config.noise_sigma) gen.noise_sigma = *config.noise_sigma;
  if (config.anomaly_amplitude) gen.anomaly_amplitude = *config.anomaly_amplitude;
  if (config.window_len != 0) {
    if (config.archetype == "power") {
      if (config.window_len % 7 != 0) {
        fail(ErrorCode::InvalidArgument, "power windows span 7 days; window_len must be a multiple of 7");
      }
      gen.points_per_day = static_cast<int>(config.window_len / 7);
    } else {
      gen.window_len = config.window_len;
    }
  }
  return gen;
}

double archetype_interval_s(const std::string& archetype) {
  if (archetype == "power") return 7200.0;  // 12 samples/day over a week
  if (archetype == "loop") return 500.0;    // one event cycle of 36 samples
  if (archetype == "land") return 720.0;
  fail(ErrorCode::InvalidArgument, "unknown archetype '" + archetype + "'");
}

std::vector<Window> acquire_windows(const ExperimentConfig& config) {
  if (config.series_csv.empty()) {
    const GeneratorConfig gen = generator_config(config);
    if (config.archetype == "power") return gen_power_like(gen);
    if (config.archetype == "loop") return gen_loop_like(gen);
    return gen_land_like(gen);
  }
  TimeSeries series = read_series_csv(config.series_csv);
  if (config.downsample_factor > 1) series = downsample(series, config.downsample_factor);
  if (config.window_len == 0) {
    fail(ErrorCode::InvalidArgument, "window_len is required for CSV input");
  }
  const std::size_t stride = config.stride != 0 ? config.stride : config.window_len;
  std::vector<Window> windows = make_windows(series, config.window_len, stride);
  if (!config.labels_csv.empty()) {
    for (const auto& [id, label] : read_labels_csv(config.labels_csv)) {
      if (id >= windows.size()) {
        fail(ErrorCode::InvalidArgument,
             "label for window " + std::to_string(id) + " but only " +
                 std::to_string(windows.size()) + " windows");
      }
      windows[id].label = label;
    }
  }
  return windows;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report;
  report.seed = config.seed;
  report.dataset_name = config.series_csv.empty()
                            ? config.archetype
                            : std::filesystem::path(config.series_csv).stem().string();
  report.config_echo = describe_config(config);

  const std::vector<Window> windows =
      run_stage(report, "acquire_data", [&] { return acquire_windows(config); });

  DatasetSplit split =
      run_stage(report, "split", [&] { return split_windows(windows, config); });

  run_stage(report, "normalize", [&] {
    normalize_split(split, fit_normalization(split.normal_train));
  });

  run_stage(report, "predictor_training", [&] {
    TrainedPredictor trained = train_predictor(split, predictor_train_config(config));
    report.predictor = std::move(trained.params);
    report.predictor_history = std::move(trained.history);
  });

  // Held-out windows scored by every method, in a fixed order.
  std::vector<Window> test_windows = split.normal_test;
  test_windows.insert(test_windows.end(), split.abnormal_test.begin(),
                      split.abnormal_test.end());

  const std::vector<ErrorVector> error_vectors = run_stage(report, "error_vectors", [&] {
    std::vector<ErrorVector> vectors;
    vectors.reserve(test_windows.size());
    for (const Window& w : test_windows) {
      vectors.push_back(prediction_errors(report.predictor, w));
    }
    return vectors;
  });

  std::vector<std::size_t> fit_idx;
  std::vector<std::size_t> eval_idx;
  run_stage(report, "error_split", [&] {
    std::vector<int> labels;
    labels.reserve(error_vectors.size());
    for (const ErrorVector& v : error_vectors) labels.push_back(v.label);
    stratified_split_indices(labels, config.error_split_ratio,
                             stage_seed(config.seed, SeedStream::error_split), fit_idx, eval_idx);
  });

  run_stage(report, "nb_fit", [&] {
    ErrorDataset fit_set{{}, SplitTag::train};
    fit_set.vectors.reserve(fit_idx.size());
    for (std::size_t i : fit_idx) fit_set.vectors.push_back(error_vectors[i]);
    report.nb = fit_nb(fit_set);
  });

  ErrorDataset eval_set{{}, SplitTag::test};
  eval_set.vectors.reserve(eval_idx.size());
  for (std::size_t i : eval_idx) eval_set.vectors.push_back(error_vectors[i]);

  const ConfusionCounts nb_counts = run_stage(report, "nb_evaluation", [&] {
    return evaluate_nb(report.nb, eval_set);
  });

  // Baselines see the same abnormal windows the NB fit consumed (split again
  // into train/valid) plus the normal train/valid windows, and are scored on
  // exactly the windows behind eval_set.
  std::vector<Window> baseline_train = split.normal_train;
  std::vector<Window> baseline_valid = split.normal_valid;
  run_stage(report, "baseline_data", [&] {
    std::vector<std::size_t> abnormal_fit;
    for (std::size_t i : fit_idx) {
      if (error_vectors[i].label == 1) abnormal_fit.push_back(i);
    }
    Rng rng(stage_seed(config.seed, SeedStream::baseline_split));
    rng.shuffle(abnormal_fit);
    const auto keep =
        static_cast<std::size_t>(config.error_split_ratio * static_cast<double>(abnormal_fit.size()));
    for (std::size_t k = 0; k < abnormal_fit.size(); ++k) {
      (k < keep ? baseline_train : baseline_valid).push_back(test_windows[abnormal_fit[k]]);
    }
  });

  run_stage(report, "classifier_training", [&] {
    TrainConfig tc;
    tc.hidden = config.classifier_hidden;
    tc.learning_rate = config.learning_rate;
    tc.epochs = config.classifier_epochs;
    tc.dropout = config.classifier_dropout;
    tc.l2 = config.l2;
    tc.seed = stage_seed(config.seed, SeedStream::classifier);
    TrainedLstmClassifier trained = train_lstm_classifier(baseline_train, baseline_valid, tc);
    report.classifier = std::move(trained.params);
    report.classifier_history = std::move(trained.history);
  });

  run_stage(report, "mlp_training", [&] {
    TrainConfig tc;
    tc.learning_rate = config.learning_rate;
    tc.epochs = config.mlp_epochs;
    tc.dropout = config.classifier_dropout;
    tc.l2 = config.l2;
    tc.seed = stage_seed(config.seed, SeedStream::mlp);
    TrainedMlp trained = train_mlp(baseline_train, baseline_valid, tc);
    report.mlp = std::move(trained.params);
    report.mlp_history = std::move(trained.history);
  });

  run_stage(report, "baseline_evaluation", [&] {
    std::vector<int> truth;
    std::vector<int> lstm_pred;
    std::vector<int> mlp_pred;
    for (std::size_t i : eval_idx) {
      const Window& w = test_windows[i];
      truth.push_back(required_label(w));
      lstm_pred.push_back(classify_window(report.classifier, w).label);
      mlp_pred.push_back(classify_window(report.mlp, w).label);
    }
    report.methods.push_back(make_result("LSTM-Gauss-NBayes", nb_counts, config.beta));
    report.methods.push_back(
        make_result("LSTM NN", confusion(truth, lstm_pred), config.beta));
    report.methods.push_back(make_result("MLP", confusion(truth, mlp_pred), config.beta));
  });

  return report;
}

CvResult crossval_select(const std::vector<Window>& windows, const ExperimentConfig& config,
                         CvTask task) {
  const auto folds = static_cast<std::size_t>(config.cv_folds);
  if (config.cv_folds < 2) fail(ErrorCode::InvalidFolds, "cv_folds must be at least 2");
  if (windows.size() < folds) {
    fail(ErrorCode::InvalidFolds, "need at least one window per fold, got " +
                                      std::to_string(windows.size()) + " windows for " +
                                      std::to_string(folds) + " folds");
  }

  // Shuffled round-robin fold assignment: every fold is non-empty.
  std::vector<std::size_t> order(windows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng shuffle_rng(stage_seed(config.seed, SeedStream::cv_shuffle));
  shuffle_rng.shuffle(order);
  std::vector<std::size_t> fold_of(windows.size());
  for (std::size_t p = 0; p < order.size(); ++p) fold_of[order[p]] = p % folds;

  std::vector<int> hiddens = config.hidden_grid;
  if (hiddens.empty() || task == CvTask::mlp) hiddens = {config.hidden};
  std::vector<double> rates = config.learning_rate_grid;
  if (rates.empty()) rates = {config.learning_rate};
  std::vector<double> dropouts = config.dropout_grid;
  if (dropouts.empty()) dropouts = {config.dropout};
  std::vector<double> l2s = config.l2_grid;
  if (l2s.empty()) l2s = {config.l2};

  const auto held_out_score = [&](const std::vector<Window>& train,
                                  const std::vector<Window>& test, const TrainConfig& tc) {
    double total = 0.0;
    switch (task) {
      case CvTask::predictor: {
        DatasetSplit split;
        split.normal_train = train;
        const TrainedPredictor trained = train_predictor(split, tc);
        ForwardCache cache;
        for (const Window& w : test) {
          const std::vector<double> preds =
              forward(w, trained.params, ForwardMode::inference(), cache);
          total += mse_final_step(preds.back(), w.points.back()).loss;
        }
        break;
      }
      case CvTask::lstm_classifier: {
        const TrainedLstmClassifier trained = train_lstm_classifier(train, {}, tc);
        for (const Window& w : test) {
          total += binary_cross_entropy(classify_window(trained.params, w).probability,
                                        required_label(w))
                       .loss;
        }
        break;
      }
      case CvTask::mlp: {
        const TrainedMlp trained = train_mlp(train, {}, tc);
        for (const Window& w : test) {
          total += binary_cross_entropy(classify_window(trained.params, w).probability,
                                        required_label(w))
                       .loss;
        }
        break;
      }
    }
    return total / static_cast<double>(test.size());
  };

  CvResult result;
  bool have_best = false;
  std::size_t combo = 0;
  for (int hidden : hiddens) {
    for (double rate : rates) {
      for (double drop : dropouts) {
        for (double l2 : l2s) {
          std::vector<double> scores(folds, 0.0);
          for (std::size_t f = 0; f < folds; ++f) {
            std::vector<Window> train;
            std::vector<Window> test;
            for (std::size_t i = 0; i < windows.size(); ++i) {
              (fold_of[i] == f ? test : train).push_back(windows[i]);
            }
            TrainConfig tc;
            tc.hidden = hidden;
            tc.learning_rate = rate;
            tc.epochs = config.cv_epochs;
            tc.dropout = drop;
            tc.l2 = l2;
            tc.seed = mix_seed(stage_seed(config.seed, SeedStream::cv_train), combo * folds + f);
            scores[f] = held_out_score(train, test, tc);
          }
          const double mean =
              std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(folds);
          if (!have_best || mean < result.mean_score) {
            have_best = true;
            result.mean_score = mean;
            result.fold_scores = scores;
            result.best.hidden = hidden;
            result.best.learning_rate = rate;
            result.best.dropout = drop;
            result.best.l2 = l2;
            result.best.epochs = config.cv_epochs;
            result.best.seed = config.seed;
          }
          ++combo;
        }
      }
    }
  }
  return result;
}

void emit_report(const ExperimentReport& report, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) fail(ErrorCode::IoError, "cannot create '" + out_dir.string() + "': " + ec.message());

  std::ostringstream table;
  table << "dataset = " << report.dataset_name << "\n";
  table << "seed = " << report.seed << "\n\n";
  char line[160];
  std::snprintf(line, sizeof(line), "%-20s %9s %10s %7s %7s\n", "method", "accuracy",
                "precision", "recall", "f1");
  table << line;
  for (const MethodResult& m : report.methods) {
    std::snprintf(line, sizeof(line), "%-20s %9.3f %10.3f %7.3f %7.3f\n", m.method.c_str(),
                  m.metrics.accuracy, m.metrics.precision, m.metrics.recall, m.metrics.f_beta);
    table << line;
  }
  table << "\nconfig\n------\n" << report.config_echo;
  write_text_file(out_dir / "report.txt", table.str());

  std::string csv = "method,accuracy,precision,recall,f1\n";
  for (const MethodResult& m : report.methods) {
    csv += m.method + ',' + three_decimals(m.metrics.accuracy) + ',' +
           three_decimals(m.metrics.precision) + ',' + three_decimals(m.metrics.recall) + ',' +
           three_decimals(m.metrics.f_beta) + '\n';
  }
  write_text_file(out_dir / "metrics.csv", csv);

  write_loss_history_csv(out_dir / "loss_history_predictor.csv", report.predictor_history);
  write_loss_history_csv(out_dir / "loss_history_classifier.csv", report.classifier_history);
  write_loss_history_csv(out_dir / "loss_history_mlp.csv", report.mlp_history);
}

void write_loss_history_csv(const std::filesystem::path& path,
                            const std::vector<EpochLoss>& history) {
  std::string text = "epoch,train_loss,valid_loss\n";
  for (std::size_t i = 0; i < history.size(); ++i) {
    text += std::to_string(i) + ',' + format_double(history[i].train) + ',' +
            format_double(history[i].valid) + '\n';
  }
  write_text_file(path, text);
}

void write_errors_csv(const std::filesystem::path& path, const std::vector<ErrorVector>& vectors) {
  std::size_t dim = 0;
  for (const ErrorVector& v : vectors) {
    if (dim == 0) dim = v.errors.size();
    if (v.errors.empty() || v.errors.size() != dim)
      fail(ErrorCode::ShapeError, "error vectors must share one nonzero dimensionality");
  }
  std::string text = "window,label";
  for (std::size_t j = 1; j <= dim; ++j) text += ",e" + std::to_string(j);
  text += '\n';
  for (const ErrorVector& v : vectors) {
    text += std::to_string(v.source_id) + ',' + std::to_string(v.label);
    for (double e : v.errors) {
      text += ',';
      text += format_double(e);
    }
    text += '\n';
  }
  write_text_file(path, text);
}

std::vector<ErrorVector> read_errors_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());

  const auto row_error = [&](std::size_t row, const std::string& what) {
    fail(ErrorCode::FormatError, path.string() + " row " + std::to_string(row) + ": " + what);
  };
  const auto split_fields = [](const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(start));
        return fields;
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
  };
  const auto trimmed = [](std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) s.pop_back();
    return s;
  };

  std::string line;
  std::size_t row = 1;
  if (!std::getline(in, line)) row_error(1, "missing header");
  const std::vector<std::string> header = split_fields(trimmed(line));
  if (header.size() < 3 || header[0] != "window" || header[1] != "label")
    row_error(1, "expected header window,label,e1,...");
  for (std::size_t j = 2; j < header.size(); ++j) {
    if (header[j] != "e" + std::to_string(j - 1)) row_error(1, "expected column e" + std::to_string(j - 1));
  }
  const std::size_t dim = header.size() - 2;

  std::vector<ErrorVector> vectors;
  while (std::getline(in, line)) {
    ++row;
    const std::string cleaned = trimmed(line);
    if (cleaned.empty()) continue;
    const std::vector<std::string> fields = split_fields(cleaned);
    if (fields.size() != dim + 2) row_error(row, "wrong field count");
    ErrorVector v;
    try {
      v.source_id = std::stoull(fields[0]);
    } catch (const std::exception&) {
      row_error(row, "bad window id '" + fields[0] + "'");
    }
    if (fields[1] != "0" && fields[1] != "1") row_error(row, "label must be 0 or 1");
    v.label = fields[1] == "1" ? 1 : 0;
    v.errors.reserve(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      const std::string& f = fields[j + 2];
      double value = 0.0;
      const auto res = std::from_chars(f.data(), f.data() + f.size(), value);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size() || !std::isfinite(value))
        row_error(row, "bad error value '" + f + "'");
      v.errors.push_back(value);
    }
    vectors.push_back(std::move(v));
  }
  return vectors;
}

}  // namespace tsad
