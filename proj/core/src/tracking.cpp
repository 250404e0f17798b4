#include "scriptfocus/tracking.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>

#include "scriptfocus/error.hpp"
#include "scriptfocus/geometry.hpp"

namespace scriptfocus {
namespace {

// Wraps a horizontal offset into [-w/2, w/2).
double wrap_offset(double dx, double w) {
  double r = std::fmod(dx + 0.5 * w, w);
  if (r < 0.0) r += w;
  return r - 0.5 * w;
}

double wrap_coordinate(double x, double w) {
  double r = std::fmod(x, w);
  if (r < 0.0) r += w;
  return r;
}

}  // namespace

std::string_view to_string(RegionStatus status) {
  switch (status) {
    case RegionStatus::kActive: return "active";
    case RegionStatus::kHeld: return "held";
    case RegionStatus::kLost: return "lost";
  }
  return "lost";
}

BinaryMask box_fill_mask(const BBox& box, int width, int height) {
  BinaryMask mask(width, height, 0);
  for (const BBox& part : split_wrapped_bbox(box, FrameDims(width, height))) {
    // Pixel x is covered when its center x + 0.5 lies in [x0, x1).
    int xa = static_cast<int>(std::ceil(part.x0 - 0.5));
    int xb = static_cast<int>(std::ceil(part.x1 - 0.5));
    int ya = static_cast<int>(std::ceil(part.y0 - 0.5));
    int yb = static_cast<int>(std::ceil(part.y1 - 0.5));
    xa = std::clamp(xa, 0, width);
    xb = std::clamp(xb, 0, width);
    ya = std::clamp(ya, 0, height);
    yb = std::clamp(yb, 0, height);
    for (int y = ya; y < yb; ++y) {
      auto row = mask.row(y);
      std::fill(row.begin() + xa, row.begin() + std::max(xa, xb), std::uint8_t{1});
    }
  }
  if (count_set(mask) == 0) {
    // Sub-pixel box: keep the pixel under its center.
    const int cx = std::clamp(static_cast<int>(std::floor(wrap_coordinate(box.center_x(), width))), 0, width - 1);
    const int cy = std::clamp(static_cast<int>(std::floor(box.center_y())), 0, height - 1);
    mask.at(cx, cy) = 1;
  }
  return mask;
}

std::optional<SidecarRecord> query_keyframe(const FrameRequest& frame, const Cue& cue,
                                            Backend& backend, const DetectionParams& params) {
  SidecarRecord record;
  record.frame_index = frame.frame_index;
  record.cue_id = cue.id;
  record.prompt = cue.prompt;
  record.params = params;
  record.source = backend.is_replay() ? RecordSource::kFixture : RecordSource::kLive;
  try {
    record.candidates = backend.detect_candidates(frame, cue.prompt, params);
    record.detection = select_best(record.candidates, params);
    if (!record.detection) return record;
    try {
      record.mask = segment(frame, cue.prompt, record.detection->box, backend);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kOutOfFrame) {
        throw Error(ErrorCode::kBackendError, "detection box outside the frame");
      }
      if (e.code() != ErrorCode::kEmptySegmentation) throw;
      spdlog::info("frame {} cue {}: empty segmentation, using the detection box",
                   frame.frame_index, cue.id);
      record.mask = rle_encode(box_fill_mask(record.detection->box, frame.image.width,
                                             frame.image.height));
      record.source = RecordSource::kFallbackBox;
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kBackendUnavailable) throw;
    spdlog::warn("frame {} cue {}: {}", frame.frame_index, cue.id, e.what());
    return std::nullopt;
  }
  return record;
}

RegionState apply_record(const std::optional<RegionState>& previous, const Cue& cue,
                         const std::optional<SidecarRecord>& record, int frame_width,
                         const TrackingConfig& config) {
  RegionState state;
  if (previous) state = *previous;
  state.cue_id = cue.id;

  if (!record || !record->detection || !record->mask) {
    ++state.held_keyframes;
    state.status = state.held_keyframes <= config.grace_keyframes ? RegionStatus::kHeld
                                                                  : RegionStatus::kLost;
    return state;
  }

  const Detection& det = *record->detection;
  const Point2 center{det.box.center_x(), det.box.center_y()};
  const double w = static_cast<double>(frame_width);
  // A target found again after being lost starts a fresh average.
  if (!previous || !previous->detection || previous->status == RegionStatus::kLost) {
    state.smoothed_center = center;
  } else {
    const Point2 old = state.smoothed_center;
    const double alpha = config.ema_alpha;
    state.smoothed_center.x =
        wrap_coordinate(old.x + alpha * wrap_offset(center.x - old.x, w), w);
    state.smoothed_center.y = alpha * center.y + (1.0 - alpha) * old.y;
  }
  state.detection = det;
  state.mask = record->mask;
  state.mask_center = center;
  state.held_keyframes = 0;
  state.status = RegionStatus::kActive;
  return state;
}

KeyframeStep step_keyframe(const std::optional<RegionState>& previous, const FrameRequest& frame,
                           const Cue& cue, Backend& backend, const TrackingConfig& config) {
  KeyframeStep step;
  step.record = query_keyframe(frame, cue, backend, config.params);
  step.state = apply_record(previous, cue, step.record, frame.image.width, config);
  return step;
}

RegionShift region_shift(const RegionState& state, int frame_width) {
  const double dx = wrap_offset(state.smoothed_center.x - state.mask_center.x, frame_width);
  const double dy = state.smoothed_center.y - state.mask_center.y;
  return {static_cast<int>(std::lround(dx)), static_cast<int>(std::lround(dy))};
}

std::optional<Region> region_for_frame(const RegionState& state, std::int64_t) {
  if (state.status == RegionStatus::kLost || !state.mask) return std::nullopt;
  BinaryMask mask = rle_decode(*state.mask);
  const RegionShift shift = region_shift(state, mask.width);
  return Region{shift_mask(mask, shift.dx, shift.dy), state.smoothed_center};
}

}  // namespace scriptfocus
