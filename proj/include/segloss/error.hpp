#pragma once

#include <stdexcept>
#include <string>

namespace segloss {

// Error classes shared across the library. The code names appear verbatim in
// exception messages and in CLI error entries, so callers can match on them.
enum class ErrorCode {
  DimensionMismatch,
  ValueOutOfRange,
  InvalidEpsilon,
  UnknownLoss,
  UnknownParam,
  ParamOutOfRange,
  ShapeMismatch,
  EmptySource,
  InvalidThreshold,
  MalformedHeader,
  UnexpectedEof,
  UnsupportedMaxval,
  RaggedRows,
  NotADirectory,
  IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_error(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace segloss
