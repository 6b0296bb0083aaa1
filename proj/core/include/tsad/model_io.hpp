#ifndef TSAD_MODEL_IO_HPP
#define TSAD_MODEL_IO_HPP

#include <filesystem>

#include "tsad/baselines.hpp"
#include "tsad/gauss_nb.hpp"
#include "tsad/lstm.hpp"

namespace tsad {

inline constexpr int kModelFormatVersion = 1;

enum class ModelKind { lstm_predictor, lstm_classifier, mlp, gauss_nb };

const char* to_string(ModelKind kind);

// Reads just enough of a model file to report what it stores.
ModelKind peek_model_kind(const std::filesystem::path& path);

// Versioned JSON documents with exact (shortest round-trip) decimal encoding
// of every 64-bit value, so load(save(m)) reproduces m bit for bit.
void save_model(const StackedLstmParams& model, const std::filesystem::path& path);
void save_model(const LstmClassifierParams& model, const std::filesystem::path& path);
void save_model(const MlpParams& model, const std::filesystem::path& path);
void save_model(const GaussNBModel& model, const std::filesystem::path& path);

StackedLstmParams load_predictor(const std::filesystem::path& path);
LstmClassifierParams load_lstm_classifier(const std::filesystem::path& path);
MlpParams load_mlp(const std::filesystem::path& path);
GaussNBModel load_gauss_nb(const std::filesystem::path& path);

}  // namespace tsad

#endif  // TSAD_MODEL_IO_HPP
