#include "scriptfocus/detection.hpp"

#include <algorithm>
#include <cmath>

#include "scriptfocus/error.hpp"
#include "scriptfocus/sidecar.hpp"

namespace scriptfocus {

void DetectionParams::validate() const {
  auto in_open_unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (!in_open_unit(box_threshold) || !in_open_unit(text_threshold)) {
    throw Error(ErrorCode::kInvalidArgument, "detection thresholds must lie in (0, 1)");
  }
}

void BackendConfig::validate() const {
  if (kind == BackendKind::kRemote && endpoint_url.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "remote backend requires an endpoint URL");
  }
  if (kind == BackendKind::kFixture && fixture_path.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "fixture backend requires a fixture path");
  }
  if (request_timeout_ms <= 0 || max_in_flight <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "timeout and max_in_flight must be positive");
  }
}

std::optional<Detection> select_best(std::span<const Detection> candidates,
                                     const DetectionParams& params) {
  const Detection* best = nullptr;
  for (const Detection& d : candidates) {
    if (!(d.score >= params.box_threshold)) continue;
    if (best == nullptr || d.score > best->score ||
        (d.score == best->score && d.box.area() < best->box.area())) {
      best = &d;
    }
  }
  if (best == nullptr) return std::nullopt;
  return *best;
}

std::optional<Detection> detect(const FrameRequest& frame, std::string_view prompt,
                                const DetectionParams& params, Backend& backend) {
  if (frame.image.empty()) throw Error(ErrorCode::kInvalidArgument, "detect on an empty frame");
  if (prompt.empty()) throw Error(ErrorCode::kInvalidArgument, "detect with an empty prompt");
  params.validate();
  const auto candidates = backend.detect_candidates(frame, prompt, params);
  return select_best(candidates, params);
}

MaskRLE segment(const FrameRequest& frame, std::string_view prompt, const BBox& box,
                Backend& backend) {
  const Image& image = frame.image;
  if (image.empty()) throw Error(ErrorCode::kInvalidArgument, "segment on an empty frame");
  if (!(box.x0 >= 0.0 && box.x0 < box.x1 && box.x1 <= image.width && box.y0 >= 0.0 &&
        box.y0 < box.y1 && box.y1 <= image.height)) {
    throw Error(ErrorCode::kOutOfFrame, "segmentation box outside the frame");
  }
  MaskRLE rle = backend.segment_box(frame, prompt, box);
  if (rle.width != image.width || rle.height != image.height) {
    throw Error(ErrorCode::kBackendError, "mask size " + std::to_string(rle.width) + "x" +
                                              std::to_string(rle.height) +
                                              " does not match the frame");
  }
  try {
    (void)rle_decode(rle);
  } catch (const Error& e) {
    throw Error(ErrorCode::kBackendError, e.what());
  }
  if (rle_area(rle) == 0) {
    throw Error(ErrorCode::kEmptySegmentation, "backend returned an empty mask");
  }
  return rle;
}

std::unique_ptr<Backend> make_backend(const BackendConfig& config) {
  config.validate();
  if (config.kind == BackendKind::kFixture) return load_fixture(config.fixture_path);
  return make_remote_backend(config);
}

}  // namespace scriptfocus
