#include "tsad/error.hpp"

namespace tsad {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidFactor: return "InvalidFactor";
    case ErrorCode::DegenerateRange: return "DegenerateRange";
    case ErrorCode::InvalidLag: return "InvalidLag";
    case ErrorCode::InvalidWindow: return "InvalidWindow";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ShapeError: return "ShapeError";
    case ErrorCode::InvalidRate: return "InvalidRate";
    case ErrorCode::MissingClass: return "MissingClass";
    case ErrorCode::EmptyFeatures: return "EmptyFeatures";
    case ErrorCode::InvalidBeta: return "InvalidBeta";
    case ErrorCode::DivergedTraining: return "DivergedTraining";
    case ErrorCode::CacheMismatch: return "CacheMismatch";
    case ErrorCode::InvalidFolds: return "InvalidFolds";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::VersionError: return "VersionError";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace tsad
