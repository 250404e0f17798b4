#include "scriptfocus/preview.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "scriptfocus/effects.hpp"
#include "scriptfocus/error.hpp"
#include "scriptfocus/geometry.hpp"

namespace scriptfocus {
namespace {

constexpr std::array<std::uint8_t, 3> kMaskTint = {30, 144, 255};
constexpr std::array<std::uint8_t, 3> kBoxColor = {255, 64, 64};
constexpr double kTintWeight = 0.4;
constexpr int kOutlinePx = 3;

}  // namespace

Image render_detection_panel(const Image& frame, const BBox& box, const BinaryMask& mask) {
  if (mask.width != frame.width || mask.height != frame.height) {
    throw Error(ErrorCode::kDimsMismatch, "mask does not match the frame");
  }
  Image out = frame;
  for (int y = 0; y < frame.height; ++y) {
    auto row = mask.row(y);
    for (int x = 0; x < frame.width; ++x) {
      if (row[static_cast<std::size_t>(x)] == 0) continue;
      std::uint8_t* px = out.pixel(x, y);
      for (int c = 0; c < 3; ++c) {
        px[c] = static_cast<std::uint8_t>(
            std::lround((1.0 - kTintWeight) * px[c] + kTintWeight * kMaskTint[static_cast<std::size_t>(c)]));
      }
    }
  }
  for (const BBox& part : split_wrapped_bbox(box, FrameDims(frame.width, frame.height))) {
    const int xa = std::clamp(static_cast<int>(std::floor(part.x0)), 0, frame.width);
    const int xb = std::clamp(static_cast<int>(std::ceil(part.x1)), 0, frame.width);
    const int ya = std::clamp(static_cast<int>(std::floor(part.y0)), 0, frame.height);
    const int yb = std::clamp(static_cast<int>(std::ceil(part.y1)), 0, frame.height);
    for (int y = ya; y < yb; ++y) {
      for (int x = xa; x < xb; ++x) {
        const bool edge = x < xa + kOutlinePx || x >= xb - kOutlinePx || y < ya + kOutlinePx ||
                          y >= yb - kOutlinePx;
        if (!edge) continue;
        std::copy(kBoxColor.begin(), kBoxColor.end(), out.pixel(x, y));
      }
    }
  }
  return out;
}

Image render_effect_panel(const Image& frame, const BinaryMask& mask, const Cue& cue,
                          EffectKind effect) {
  const AttenuationField field =
      attenuation_field(mask, cue.feather_inner_px, cue.feather_outer_px);
  const EffectLayer layer{std::cref(field), cue.strength, cue.floor_luma, 1.0, effect};
  return combine_cues(frame, std::span<const EffectLayer>(&layer, 1), 1);
}

}  // namespace scriptfocus
