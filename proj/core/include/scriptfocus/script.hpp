#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace scriptfocus {

// Milliseconds from the start of the video. Always non-negative.
struct Timecode {
  std::int64_t millis = 0;

  auto operator<=>(const Timecode&) const = default;
};

// Accepts `HH:MM:SS.mmm` or `MM:SS.mmm`; minutes and seconds must be < 60.
// Throws Error{kMalformedTimecode}.
Timecode parse_timecode(std::string_view text);

// Canonical form is always `HH:MM:SS.mmm`.
std::string format_timecode(Timecode t);

enum class EffectKind { kVignette, kDesaturate };

std::string_view to_string(EffectKind kind);

struct Cue {
  std::string id;
  Timecode start;
  Timecode end;
  // Detector-facing noun phrase: the script prompt, trimmed, with a leading
  // "Look at the " removed.
  std::string prompt;
  // The prompt exactly as written in the script (trimmed).
  std::string source_prompt;
  EffectKind effect = EffectKind::kVignette;
  double strength = 0.8;
  double feather_inner_px = 12.0;
  double feather_outer_px = 48.0;
  std::int64_t attack_ms = 500;
  std::int64_t release_ms = 500;
  double floor_luma = 0.15;

  // Half-open: start <= t < end.
  bool contains(Timecode t) const { return start <= t && t < end; }

  bool operator==(const Cue&) const = default;
};

struct Script {
  // Sorted by start; ties keep file order.
  std::vector<Cue> cues;
  std::string source_path;

  bool operator==(const Script&) const = default;
};

// Parses the cue-block format. Throws Error{kMalformedCue} carrying the
// offending 1-based line number.
Script parse_script(std::string_view text);

// Reads and parses a script file; throws Error{kInputMissing} when the file
// cannot be opened.
Script load_script(const std::string& path);

// Emits canonical cue blocks that parse back to an equal Script (modulo
// source_path).
std::string format_script(const Script& script);

// Every cue with start <= t < end, in script order.
std::vector<Cue> active_cues(const Script& script, Timecode t);

// Strips a leading case-insensitive "Look at the " and surrounding spaces.
std::string normalize_prompt(std::string_view prompt);

}  // namespace scriptfocus
