#ifndef TSAD_ERROR_HPP
#define TSAD_ERROR_HPP

#include <stdexcept>
#include <string>

namespace tsad {

enum class ErrorCode {
  InvalidFactor,
  DegenerateRange,
  InvalidLag,
  InvalidWindow,
  EmptyDataset,
  InvalidArgument,
  ShapeError,
  InvalidRate,
  MissingClass,
  EmptyFeatures,
  InvalidBeta,
  DivergedTraining,
  CacheMismatch,
  InvalidFolds,
  FormatError,
  VersionError,
  IoError,
};

const char* to_string(ErrorCode code);

/// Library-wide exception carrying a machine-checkable error code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const noexcept { return code_; }

  /// The message without the code prefix, for callers that re-tag errors.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace tsad

#endif  // TSAD_ERROR_HPP
