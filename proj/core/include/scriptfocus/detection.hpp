#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scriptfocus/geometry.hpp"
#include "scriptfocus/image.hpp"
#include "scriptfocus/rle.hpp"

namespace scriptfocus {

// Zero-shot grounding thresholds.
struct DetectionParams {
  double box_threshold = 0.3;
  double text_threshold = 0.25;

  // Throws Error{kInvalidArgument} unless both lie in (0, 1).
  void validate() const;

  bool operator==(const DetectionParams&) const = default;
};

struct Detection {
  BBox box;
  double score = 0.0;
  std::string phrase;

  bool operator==(const Detection&) const = default;
};

// A frame handed to a backend. The index keys fixture lookups; live backends
// only look at the pixels.
struct FrameRequest {
  std::int64_t frame_index = 0;
  const Image& image;
};

struct HealthStatus {
  std::string status;
  std::string detector;
  std::string segmenter;
};

// Detect/segment provider. Implementations must be safe to call from several
// threads at once.
class Backend {
 public:
  virtual ~Backend() = default;

  // Every candidate the backend reports for the prompt, in backend order.
  virtual std::vector<Detection> detect_candidates(const FrameRequest& frame,
                                                   std::string_view prompt,
                                                   const DetectionParams& params) = 0;

  // Box-prompted mask. The prompt is passed along for keyed replay.
  virtual MaskRLE segment_box(const FrameRequest& frame, std::string_view prompt,
                              const BBox& box) = 0;

  virtual HealthStatus health() = 0;

  // True when results are replayed rather than computed live.
  virtual bool is_replay() const { return false; }
};

enum class BackendKind { kRemote, kFixture };

struct BackendConfig {
  BackendKind kind = BackendKind::kFixture;
  std::string endpoint_url;
  std::string fixture_path;
  int request_timeout_ms = 30000;
  int max_in_flight = 2;

  // Throws Error{kInvalidArgument} when the fields required by `kind` are
  // missing or the limits are not positive.
  void validate() const;
};

// Highest score at or above box_threshold; ties go to the smaller box area,
// then to the earlier candidate.
std::optional<Detection> select_best(std::span<const Detection> candidates,
                                     const DetectionParams& params);

// Runs the backend and applies select_best. std::nullopt means NoDetection.
// Propagates Error{kBackendUnavailable} and Error{kBackendError}.
std::optional<Detection> detect(const FrameRequest& frame, std::string_view prompt,
                                const DetectionParams& params, Backend& backend);

// Box-prompted segmentation. The box must lie inside the frame; this is
// checked before the backend is called. Throws Error{kEmptySegmentation} when
// the returned mask has no set pixel and Error{kBackendError} when its size
// does not match the frame.
MaskRLE segment(const FrameRequest& frame, std::string_view prompt, const BBox& box,
                Backend& backend);

// HTTP client for the inference service (/v1/detect, /v1/segment,
// /v1/health). Retries once on timeout or connection failure.
std::unique_ptr<Backend> make_remote_backend(const BackendConfig& config);

// Fixture or remote backend as configured.
std::unique_ptr<Backend> make_backend(const BackendConfig& config);

}  // namespace scriptfocus
