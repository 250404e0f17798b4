#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace scriptfocus {

enum class ErrorCode {
  kInvalidArgument,
  kMalformedTimecode,
  kMalformedCue,
  kOutOfFrame,
  kDegenerateBox,
  kEmptyMask,
  kMalformedRle,
  kBackendUnavailable,
  kBackendError,
  kEmptySegmentation,
  kMalformedFixture,
  kDimsMismatch,
  kEmptySpan,
  kInputMissing,
  kDimsInconsistent,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library. `line()` is set for script and
// fixture parse errors that can be attributed to a 1-based source line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<int> line = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<int> line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::optional<int> line_;
};

}  // namespace scriptfocus
