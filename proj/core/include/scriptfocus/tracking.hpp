#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "scriptfocus/detection.hpp"
#include "scriptfocus/image.hpp"
#include "scriptfocus/rle.hpp"
#include "scriptfocus/script.hpp"
#include "scriptfocus/sidecar.hpp"

namespace scriptfocus {

enum class RegionStatus { kActive, kHeld, kLost };

std::string_view to_string(RegionStatus status);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point2&) const = default;
};

// Tracked target of one cue between keyframes.
struct RegionState {
  std::string cue_id;
  RegionStatus status = RegionStatus::kLost;
  std::optional<Detection> detection;
  // Latest non-empty mask (possibly a filled detection box) and the center of
  // the box it was produced from.
  std::optional<MaskRLE> mask;
  Point2 mask_center;
  Point2 smoothed_center;
  int held_keyframes = 0;
};

struct TrackingConfig {
  DetectionParams params;
  int grace_keyframes = 2;
  double ema_alpha = 0.5;
};

// Runs detect and, on a hit, segment for one keyframe. Empty segmentations
// are replaced by the filled detection box (source fallback_box). Returns
// std::nullopt when the backend is unavailable. Error{kBackendError}
// propagates.
std::optional<SidecarRecord> query_keyframe(const FrameRequest& frame, const Cue& cue,
                                            Backend& backend, const DetectionParams& params);

// Folds a keyframe outcome into the tracked state. `record` is std::nullopt
// for a keyframe whose backend call failed; it counts as a miss.
RegionState apply_record(const std::optional<RegionState>& previous, const Cue& cue,
                         const std::optional<SidecarRecord>& record, int frame_width,
                         const TrackingConfig& config);

struct KeyframeStep {
  RegionState state;
  std::optional<SidecarRecord> record;
};

// query_keyframe followed by apply_record.
KeyframeStep step_keyframe(const std::optional<RegionState>& previous, const FrameRequest& frame,
                           const Cue& cue, Backend& backend, const TrackingConfig& config);

struct RegionShift {
  int dx = 0;
  int dy = 0;
  bool operator==(const RegionShift&) const = default;
};

// Integer translation from the mask's own center to the smoothed center,
// taking the shorter way around the seam.
RegionShift region_shift(const RegionState& state, int frame_width);

struct Region {
  BinaryMask mask;
  Point2 center;
};

// The held mask translated by region_shift (columns wrap); std::nullopt when
// the cue is lost or has never been found. Zero-order hold: the result is
// the same for every frame up to the next keyframe.
std::optional<Region> region_for_frame(const RegionState& state, std::int64_t frame_index);

// Mask of the pixels whose centers fall inside `box`; x1 may exceed the
// width, in which case the box wraps across the seam.
BinaryMask box_fill_mask(const BBox& box, int width, int height);

}  // namespace scriptfocus
