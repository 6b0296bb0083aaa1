#include "tsad/model_io.hpp"

#include <fstream>
#include <string>

#include <json.hpp>

#include "tsad/error.hpp"

namespace tsad {

namespace {

using nlohmann::json;

std::string loc(const std::filesystem::path& path) { return path.string(); }

json read_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, loc(path) + ": cannot open for reading");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::FormatError, loc(path) + ": " + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::FormatError, loc(path) + ": top level must be an object");
  return doc;
}

void write_document(const json& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, loc(path) + ": cannot open for writing");
  out << doc.dump(2) << '\n';
  if (!out) fail(ErrorCode::IoError, loc(path) + ": write failed");
}

const json& field(const json& doc, const std::filesystem::path& path, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end())
    fail(ErrorCode::FormatError, loc(path) + ": missing field '" + key + "'");
  return *it;
}

void check_header(const json& doc, const std::filesystem::path& path, ModelKind expected) {
  const json& version = field(doc, path, "format_version");
  if (!version.is_number_integer())
    fail(ErrorCode::FormatError, loc(path) + ": format_version must be an integer");
  if (version.get<int>() != kModelFormatVersion)
    fail(ErrorCode::VersionError,
         loc(path) + ": format_version " + version.dump() + " is not supported (expected " +
             std::to_string(kModelFormatVersion) + ")");
  const json& kind = field(doc, path, "kind");
  if (!kind.is_string())
    fail(ErrorCode::FormatError, loc(path) + ": kind must be a string");
  if (kind.get<std::string>() != to_string(expected))
    fail(ErrorCode::FormatError, loc(path) + ": kind '" + kind.get<std::string>() +
                                     "' does not match expected '" + to_string(expected) + "'");
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json data = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::filesystem::path& path,
                                 const std::string& name) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    fail(ErrorCode::FormatError,
         loc(path) + ": matrix '" + name + "' needs rows, cols and data");
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer() ||
      !j["data"].is_array())
    fail(ErrorCode::FormatError, loc(path) + ": matrix '" + name + "' has wrong field types");
  const Eigen::Index rows = j["rows"].get<Eigen::Index>();
  const Eigen::Index cols = j["cols"].get<Eigen::Index>();
  const json& data = j["data"];
  if (rows < 0 || cols < 0 ||
      data.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
    fail(ErrorCode::FormatError,
         loc(path) + ": matrix '" + name + "' data length does not match its shape");
  Eigen::MatrixXd m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c, ++k) {
      if (!data[k].is_number())
        fail(ErrorCode::FormatError, loc(path) + ": matrix '" + name + "' has a non-numeric entry");
      m(r, c) = data[k].get<double>();
    }
  return m;
}

json params_to_json(StackedLstmParams& net) {
  json blocks = json::object();
  for (const ParamView& v : net.views()) blocks[v.name] = matrix_to_json(*v.values);
  return blocks;
}

void params_from_json(const json& blocks, const std::filesystem::path& path,
                      StackedLstmParams& net) {
  if (!blocks.is_object()) fail(ErrorCode::FormatError, loc(path) + ": params must be an object");
  for (ParamView v : net.views()) {
    *v.values = matrix_from_json(field(blocks, path, v.name.c_str()), path, v.name);
  }
}

json stacked_to_json(StackedLstmParams& net, ModelKind kind) {
  return json{{"format_version", kModelFormatVersion},
              {"kind", to_string(kind)},
              {"input_dim", net.input_dim},
              {"hidden", net.hidden},
              {"params", params_to_json(net)}};
}

StackedLstmParams stacked_from_json(const json& doc, const std::filesystem::path& path,
                                    ModelKind kind) {
  check_header(doc, path, kind);
  StackedLstmParams net;
  const json& input_dim = field(doc, path, "input_dim");
  const json& hidden = field(doc, path, "hidden");
  if (!input_dim.is_number_integer() || !hidden.is_number_integer())
    fail(ErrorCode::FormatError, loc(path) + ": input_dim and hidden must be integers");
  net.input_dim = input_dim.get<Eigen::Index>();
  net.hidden = hidden.get<Eigen::Index>();
  if (net.input_dim < 1 || net.hidden < 1)
    fail(ErrorCode::FormatError, loc(path) + ": input_dim and hidden must be >= 1");
  params_from_json(field(doc, path, "params"), path, net);
  try {
    net.validate();
  } catch (const Error&) {
    fail(ErrorCode::FormatError, loc(path) + ": parameter block shapes are inconsistent");
  }
  return net;
}

}  // namespace

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::lstm_predictor: return "lstm_predictor";
    case ModelKind::lstm_classifier: return "lstm_classifier";
    case ModelKind::mlp: return "mlp";
    case ModelKind::gauss_nb: return "gauss_nb";
  }
  return "unknown";
}

ModelKind peek_model_kind(const std::filesystem::path& path) {
  const json doc = read_document(path);
  const json& kind = field(doc, path, "kind");
  if (!kind.is_string()) fail(ErrorCode::FormatError, loc(path) + ": kind must be a string");
  const std::string name = kind.get<std::string>();
  for (ModelKind k : {ModelKind::lstm_predictor, ModelKind::lstm_classifier, ModelKind::mlp,
                      ModelKind::gauss_nb})
    if (name == to_string(k)) return k;
  fail(ErrorCode::FormatError, loc(path) + ": unknown model kind '" + name + "'");
}

void save_model(const StackedLstmParams& model, const std::filesystem::path& path) {
  StackedLstmParams copy = model;
  write_document(stacked_to_json(copy, ModelKind::lstm_predictor), path);
}

void save_model(const LstmClassifierParams& model, const std::filesystem::path& path) {
  StackedLstmParams copy = model.net;
  write_document(stacked_to_json(copy, ModelKind::lstm_classifier), path);
}

void save_model(const MlpParams& model, const std::filesystem::path& path) {
  MlpParams copy = model;
  json blocks = json::object();
  for (const ParamView& v : copy.views()) blocks[v.name] = matrix_to_json(*v.values);
  write_document(json{{"format_version", kModelFormatVersion},
                      {"kind", to_string(ModelKind::mlp)},
                      {"input_dim", copy.input_dim},
                      {"params", std::move(blocks)}},
                 path);
}

void save_model(const GaussNBModel& model, const std::filesystem::path& path) {
  write_document(json{{"format_version", kModelFormatVersion},
                      {"kind", to_string(ModelKind::gauss_nb)},
                      {"prior_abnormal", model.prior_abnormal},
                      {"variance_floor", model.variance_floor},
                      {"mean", matrix_to_json(model.mean)},
                      {"variance", matrix_to_json(model.variance)}},
                 path);
}

StackedLstmParams load_predictor(const std::filesystem::path& path) {
  return stacked_from_json(read_document(path), path, ModelKind::lstm_predictor);
}

LstmClassifierParams load_lstm_classifier(const std::filesystem::path& path) {
  return {stacked_from_json(read_document(path), path, ModelKind::lstm_classifier)};
}

MlpParams load_mlp(const std::filesystem::path& path) {
  const json doc = read_document(path);
  check_header(doc, path, ModelKind::mlp);
  const json& input_dim = field(doc, path, "input_dim");
  if (!input_dim.is_number_integer())
    fail(ErrorCode::FormatError, loc(path) + ": input_dim must be an integer");
  if (input_dim.get<Eigen::Index>() < 1)
    fail(ErrorCode::FormatError, loc(path) + ": input_dim must be >= 1");
  MlpParams model = MlpParams::init(input_dim.get<Eigen::Index>(), 0);
  const json& blocks = field(doc, path, "params");
  if (!blocks.is_object()) fail(ErrorCode::FormatError, loc(path) + ": params must be an object");
  for (ParamView v : model.views()) {
    Eigen::MatrixXd loaded =
        matrix_from_json(field(blocks, path, v.name.c_str()), path, v.name);
    if (loaded.rows() != v.values->rows() || loaded.cols() != v.values->cols())
      fail(ErrorCode::FormatError, loc(path) + ": block '" + v.name + "' has the wrong shape");
    *v.values = std::move(loaded);
  }
  return model;
}

GaussNBModel load_gauss_nb(const std::filesystem::path& path) {
  const json doc = read_document(path);
  check_header(doc, path, ModelKind::gauss_nb);
  GaussNBModel model;
  const json& prior = field(doc, path, "prior_abnormal");
  const json& floor = field(doc, path, "variance_floor");
  if (!prior.is_number() || !floor.is_number())
    fail(ErrorCode::FormatError, loc(path) + ": prior and floor must be numbers");
  model.prior_abnormal = prior.get<double>();
  model.variance_floor = floor.get<double>();
  if (!(model.prior_abnormal > 0.0 && model.prior_abnormal < 1.0))
    fail(ErrorCode::FormatError, loc(path) + ": prior_abnormal must lie in (0, 1)");
  if (!(model.variance_floor > 0.0))
    fail(ErrorCode::FormatError, loc(path) + ": variance_floor must be positive");
  model.mean = matrix_from_json(field(doc, path, "mean"), path, "mean");
  model.variance = matrix_from_json(field(doc, path, "variance"), path, "variance");
  if (model.mean.rows() != 2 || model.variance.rows() != 2 ||
      model.mean.cols() != model.variance.cols())
    fail(ErrorCode::FormatError, loc(path) + ": mean and variance must both be 2 x d");
  if ((model.variance.array() < model.variance_floor).any())
    fail(ErrorCode::FormatError, loc(path) + ": variances fall below the stored floor");
  return model;
}

}  // namespace tsad
