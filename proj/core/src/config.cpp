#include "tsad/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tsad/csv.hpp"
#include "tsad/error.hpp"

namespace tsad {

namespace {

using nlohmann::json;

class FieldReader {
 public:
  FieldReader(const std::string& source, const std::string& key, const json& value)
      : source_(source), key_(key), value_(value) {}

  std::string str() const {
    if (!value_.is_string()) wrong_type("a string");
    return value_.get<std::string>();
  }

  double number() const {
    if (!value_.is_number()) wrong_type("a number");
    return value_.get<double>();
  }

  int integer() const {
    if (!value_.is_number_integer()) wrong_type("an integer");
    return value_.get<int>();
  }

  std::size_t count() const {
    if (!value_.is_number_integer() || value_.get<long long>() < 0)
      wrong_type("a nonnegative integer");
    return value_.get<std::size_t>();
  }

  std::uint64_t uint64() const {
    if (!value_.is_number_integer() || value_.get<long long>() < 0)
      wrong_type("a nonnegative integer");
    return value_.get<std::uint64_t>();
  }

  std::vector<int> int_array() const {
    if (!value_.is_array()) wrong_type("an array of integers");
    std::vector<int> out;
    for (const json& item : value_) {
      if (!item.is_number_integer()) wrong_type("an array of integers");
      out.push_back(item.get<int>());
    }
    return out;
  }

  std::vector<double> double_array() const {
    if (!value_.is_array()) wrong_type("an array of numbers");
    std::vector<double> out;
    for (const json& item : value_) {
      if (!item.is_number()) wrong_type("an array of numbers");
      out.push_back(item.get<double>());
    }
    return out;
  }

 private:
  [[noreturn]] void wrong_type(const char* expected) const {
    fail(ErrorCode::FormatError, source_ + ": key '" + key_ + "' must be " + expected);
  }

  const std::string& source_;
  const std::string& key_;
  const json& value_;
};

std::string join_ints(const std::vector<int>& v) {
  std::string out = "[";
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k > 0) out += ", ";
    out += std::to_string(v[k]);
  }
  return out + "]";
}

std::string join_doubles(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k > 0) out += ", ";
    out += format_double(v[k]);
  }
  return out + "]";
}

}  // namespace

void ExperimentConfig::validate() const {
  if (series_csv.empty()) {
    if (archetype != "power" && archetype != "loop" && archetype != "land")
      fail(ErrorCode::InvalidArgument,
           "archetype must be power, loop or land (got '" + archetype + "')");
  } else if (!std::filesystem::exists(series_csv)) {
    fail(ErrorCode::InvalidArgument, "series_csv path does not exist: " + series_csv);
  }
  if (!labels_csv.empty() && !std::filesystem::exists(labels_csv))
    fail(ErrorCode::InvalidArgument, "labels_csv path does not exist: " + labels_csv);
  if (std::abs(train_ratio + valid_ratio + test_ratio - 1.0) > 1e-9)
    fail(ErrorCode::InvalidArgument, "train/valid/test ratios must sum to 1");
  if (train_ratio < 0.0 || valid_ratio < 0.0 || test_ratio < 0.0)
    fail(ErrorCode::InvalidArgument, "split ratios must be nonnegative");
  if (error_split_ratio <= 0.0 || error_split_ratio >= 1.0)
    fail(ErrorCode::InvalidArgument, "error_split_ratio must lie in (0, 1)");
  if (downsample_factor < 1)
    fail(ErrorCode::InvalidArgument, "downsample_factor must be >= 1");
  if (hidden < 1 || classifier_hidden < 1)
    fail(ErrorCode::InvalidArgument, "hidden sizes must be >= 1");
  if (epochs < 0 || classifier_epochs < 0 || mlp_epochs < 0 || cv_epochs < 0)
    fail(ErrorCode::InvalidArgument, "epoch counts must be >= 0");
  if (learning_rate <= 0.0)
    fail(ErrorCode::InvalidArgument, "learning_rate must be positive");
  if (dropout < 0.0 || dropout >= 1.0 || classifier_dropout < 0.0 || classifier_dropout >= 1.0)
    fail(ErrorCode::InvalidRate, "dropout rates must lie in [0, 1)");
  if (l2 < 0.0) fail(ErrorCode::InvalidArgument, "l2 must be >= 0");
  if (beta <= 0.0) fail(ErrorCode::InvalidBeta, "beta must be positive");
  if (cv_folds < 2) fail(ErrorCode::InvalidFolds, "cv_folds must be >= 2");
  if (noise_sigma.has_value() && *noise_sigma < 0.0)
    fail(ErrorCode::InvalidArgument, "noise_sigma must be >= 0");
  if (anomaly_amplitude.has_value() && *anomaly_amplitude <= 0.0)
    fail(ErrorCode::InvalidArgument, "anomaly_amplitude must be positive");
}

ExperimentConfig parse_config(const std::string& text, const std::string& source_name) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::FormatError, source_name + ": " + e.what());
  }
  if (!doc.is_object())
    fail(ErrorCode::FormatError, source_name + ": top level must be an object");

  ExperimentConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    const FieldReader read(source_name, key, value);
    if (key == "archetype") cfg.archetype = read.str();
    else if (key == "series_csv") cfg.series_csv = read.str();
    else if (key == "labels_csv") cfg.labels_csv = read.str();
    else if (key == "n_normal") cfg.n_normal = read.count();
    else if (key == "n_abnormal") cfg.n_abnormal = read.count();
    else if (key == "noise_sigma") cfg.noise_sigma = read.number();
    else if (key == "anomaly_amplitude") cfg.anomaly_amplitude = read.number();
    else if (key == "downsample_factor") cfg.downsample_factor = read.count();
    else if (key == "window_len") cfg.window_len = read.count();
    else if (key == "stride") cfg.stride = read.count();
    else if (key == "train_ratio") cfg.train_ratio = read.number();
    else if (key == "valid_ratio") cfg.valid_ratio = read.number();
    else if (key == "test_ratio") cfg.test_ratio = read.number();
    else if (key == "error_split_ratio") cfg.error_split_ratio = read.number();
    else if (key == "hidden") cfg.hidden = read.integer();
    else if (key == "learning_rate") cfg.learning_rate = read.number();
    else if (key == "epochs") cfg.epochs = read.integer();
    else if (key == "dropout") cfg.dropout = read.number();
    else if (key == "l2") cfg.l2 = read.number();
    else if (key == "classifier_hidden") cfg.classifier_hidden = read.integer();
    else if (key == "classifier_epochs") cfg.classifier_epochs = read.integer();
    else if (key == "mlp_epochs") cfg.mlp_epochs = read.integer();
    else if (key == "classifier_dropout") cfg.classifier_dropout = read.number();
    else if (key == "beta") cfg.beta = read.number();
    else if (key == "cv_folds") cfg.cv_folds = read.integer();
    else if (key == "cv_epochs") cfg.cv_epochs = read.integer();
    else if (key == "hidden_grid") cfg.hidden_grid = read.int_array();
    else if (key == "learning_rate_grid") cfg.learning_rate_grid = read.double_array();
    else if (key == "dropout_grid") cfg.dropout_grid = read.double_array();
    else if (key == "l2_grid") cfg.l2_grid = read.double_array();
    else if (key == "seed") cfg.seed = read.uint64();
    else if (key == "out_dir") cfg.out_dir = read.str();
    else fail(ErrorCode::FormatError, source_name + ": unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.string());
}

std::string describe_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "anomaly_amplitude = "
      << (c.anomaly_amplitude ? format_double(*c.anomaly_amplitude) : "auto") << '\n'
      << "archetype = " << (c.archetype.empty() ? "(csv input)" : c.archetype) << '\n'
      << "beta = " << format_double(c.beta) << '\n'
      << "classifier_dropout = " << format_double(c.classifier_dropout) << '\n'
      << "classifier_epochs = " << c.classifier_epochs << '\n'
      << "classifier_hidden = " << c.classifier_hidden << '\n'
      << "cv_epochs = " << c.cv_epochs << '\n'
      << "cv_folds = " << c.cv_folds << '\n'
      << "downsample_factor = " << c.downsample_factor << '\n'
      << "dropout = " << format_double(c.dropout) << '\n'
      << "dropout_grid = " << join_doubles(c.dropout_grid) << '\n'
      << "epochs = " << c.epochs << '\n'
      << "error_split_ratio = " << format_double(c.error_split_ratio) << '\n'
      << "hidden = " << c.hidden << '\n'
      << "hidden_grid = " << join_ints(c.hidden_grid) << '\n'
      << "l2 = " << format_double(c.l2) << '\n'
      << "l2_grid = " << join_doubles(c.l2_grid) << '\n'
      << "labels_csv = " << (c.labels_csv.empty() ? "(none)" : c.labels_csv) << '\n'
      << "learning_rate = " << format_double(c.learning_rate) << '\n'
      << "learning_rate_grid = " << join_doubles(c.learning_rate_grid) << '\n'
      << "mlp_epochs = " << c.mlp_epochs << '\n'
      << "n_abnormal = " << c.n_abnormal << '\n'
      << "n_normal = " << c.n_normal << '\n'
      << "noise_sigma = " << (c.noise_sigma ? format_double(*c.noise_sigma) : "auto") << '\n'
      << "seed = " << c.seed << '\n'
      << "series_csv = " << (c.series_csv.empty() ? "(generated)" : c.series_csv) << '\n'
      << "stride = " << c.stride << '\n'
      << "test_ratio = " << format_double(c.test_ratio) << '\n'
      << "train_ratio = " << format_double(c.train_ratio) << '\n'
      << "valid_ratio = " << format_double(c.valid_ratio) << '\n'
      << "window_len = " << c.window_len << '\n';
  return out.str();
}

}  // namespace tsad
