#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scriptfocus/detection.hpp"
#include "scriptfocus/rle.hpp"

namespace scriptfocus {

enum class RecordSource { kLive, kFallbackBox, kFixture };

std::string_view to_string(RecordSource source);

// One keyframe query for one cue. A record without a detection never carries
// a mask.
struct SidecarRecord {
  std::int64_t frame_index = 0;
  std::string cue_id;
  std::string prompt;
  DetectionParams params;
  // Full backend response, before the highest-confidence rule.
  std::vector<Detection> candidates;
  std::optional<Detection> detection;
  std::optional<MaskRLE> mask;
  RecordSource source = RecordSource::kLive;

  bool operator==(const SidecarRecord&) const = default;
};

inline constexpr int kSidecarVersion = 1;

struct Sidecar {
  int version = kSidecarVersion;
  DetectionParams params;
  std::vector<SidecarRecord> records;

  bool operator==(const Sidecar&) const = default;
};

std::string sidecar_to_json(const Sidecar& sidecar);
// Throws Error{kMalformedFixture} on bad JSON, schema violations or a
// version other than kSidecarVersion.
Sidecar sidecar_from_json(const std::string& text);

// Atomic write (temp file + rename).
void write_sidecar(const Sidecar& sidecar, const std::string& path);
// Throws Error{kInputMissing} if the file is absent, else as sidecar_from_json.
Sidecar load_sidecar(const std::string& path);

// Read-only replay of a sidecar, keyed by (frame_index, prompt). When a key
// appears more than once the first record wins.
class FixtureBackend final : public Backend {
 public:
  explicit FixtureBackend(Sidecar sidecar);

  const SidecarRecord* find(std::int64_t frame_index, std::string_view prompt) const;
  const Sidecar& sidecar() const { return sidecar_; }

  std::vector<Detection> detect_candidates(const FrameRequest& frame, std::string_view prompt,
                                           const DetectionParams& params) override;
  MaskRLE segment_box(const FrameRequest& frame, std::string_view prompt,
                      const BBox& box) override;
  HealthStatus health() override;
  bool is_replay() const override { return true; }

 private:
  Sidecar sidecar_;
  std::map<std::pair<std::int64_t, std::string>, std::size_t> index_;
};

std::unique_ptr<FixtureBackend> load_fixture(const std::string& path);

}  // namespace scriptfocus
