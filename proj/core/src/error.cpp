#include "scriptfocus/error.hpp"

namespace scriptfocus {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kMalformedTimecode: return "MalformedTimecode";
    case ErrorCode::kMalformedCue: return "MalformedCue";
    case ErrorCode::kOutOfFrame: return "OutOfFrame";
    case ErrorCode::kDegenerateBox: return "DegenerateBox";
    case ErrorCode::kEmptyMask: return "EmptyMask";
    case ErrorCode::kMalformedRle: return "MalformedRLE";
    case ErrorCode::kBackendUnavailable: return "BackendUnavailable";
    case ErrorCode::kBackendError: return "BackendError";
    case ErrorCode::kEmptySegmentation: return "EmptySegmentation";
    case ErrorCode::kMalformedFixture: return "MalformedFixture";
    case ErrorCode::kDimsMismatch: return "DimsMismatch";
    case ErrorCode::kEmptySpan: return "EmptySpan";
    case ErrorCode::kInputMissing: return "InputMissing";
    case ErrorCode::kDimsInconsistent: return "DimsInconsistent";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorCode code, const std::string& message,
                     std::optional<int> line) {
  std::string out(to_string(code));
  if (line) out += " (line " + std::to_string(*line) + ")";
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::optional<int> line)
    : std::runtime_error(decorate(code, message, line)), code_(code), line_(line) {}

}  // namespace scriptfocus
