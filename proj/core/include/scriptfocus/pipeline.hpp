#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scriptfocus/detection.hpp"
#include "scriptfocus/script.hpp"
#include "scriptfocus/sidecar.hpp"
#include "scriptfocus/tracking.hpp"

namespace scriptfocus {

struct RunConfig {
  int keyframe_interval = 15;
  double fps = 0.0;
  int grace_keyframes = 2;
  double ema_alpha = 0.5;
  DetectionParams params;
  BackendConfig backend;

  std::string frames_dir;
  std::string output_dir;
  // Where this run's sidecar is written. Defaults to <output_dir>/sidecar.json.
  std::string sidecar_path;
  // Replay keyframes from this sidecar; planned keyframes it lacks fall
  // through to the backend.
  std::string reuse_sidecar_path;
  // Pick up an interrupted run: reuse records already in sidecar_path and
  // keep output frames that already exist.
  bool resume = false;

  // Compositing threads; 0 means all available CPUs.
  int workers = 0;
  std::optional<EffectKind> effect_override;

  // Stop after this many output frames have been written, leaving a
  // resumable run behind.
  std::optional<std::int64_t> stop_after_frames;

  // Throws Error{kInvalidArgument}.
  void validate() const;
  TrackingConfig tracking() const { return {params, grace_keyframes, ema_alpha}; }
  std::string effective_sidecar_path() const;
};

// Inclusive range of frames a cue covers: first = ceil(start*fps/1000),
// last = ceil(end*fps/1000) - 1. Throws Error{kEmptySpan} when last < first.
struct FrameSpan {
  std::int64_t first = 0;
  std::int64_t last = 0;
  bool contains(std::int64_t f) const { return first <= f && f <= last; }
};
FrameSpan cue_frame_span(const Cue& cue, double fps);

// first, first+n, first+2n, ... <= last, plus last when not already hit.
std::vector<std::int64_t> plan_keyframes(const FrameSpan& span, int n);
std::vector<std::int64_t> plan_keyframes(const Cue& cue, double fps, int n);

// Presentation time of a frame in milliseconds.
inline double frame_time_ms(std::int64_t frame_index, double fps) {
  return static_cast<double>(frame_index) * 1000.0 / fps;
}

struct CuePlan {
  std::size_t cue_index = 0;
  // Cue span clipped to the frames on disk; empty when the cue lies outside
  // them.
  std::optional<FrameSpan> span;
  std::vector<std::int64_t> keyframes;
};

// Keyframe plan for every cue over the frames present on disk.
std::vector<CuePlan> plan_run(const Script& script, double fps, int n,
                              std::int64_t first_frame, std::int64_t last_frame);

struct RunSummary {
  std::int64_t frames_total = 0;
  std::int64_t frames_rendered = 0;
  std::int64_t frames_copied = 0;
  std::int64_t frames_kept = 0;  // already present when resuming
  std::int64_t keyframes_planned = 0;
  std::int64_t keyframes_active = 0;
  std::int64_t keyframes_held = 0;
  std::int64_t keyframes_lost = 0;
  std::int64_t fallback_masks = 0;
  std::int64_t records_reused = 0;
  std::int64_t backend_queries = 0;
  std::int64_t backend_unavailable = 0;
  bool stopped_early = false;
  double detect_seconds = 0.0;
  double render_seconds = 0.0;
};

// Keyframe phase only: queries (or replays) every planned keyframe and
// writes the sidecar. Nothing is rendered.
RunSummary detect_keyframes(const RunConfig& config, const Script& script);

// Full run: keyframe phase, then every input frame is written to the output
// directory in index order. Frames without an effect are byte-identical
// copies. On Error{kBackendError} the partial sidecar is written before the
// error propagates.
RunSummary process_video(const RunConfig& config, const Script& script);

}  // namespace scriptfocus
