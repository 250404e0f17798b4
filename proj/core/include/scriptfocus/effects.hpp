#pragma once

#include <functional>
#include <span>

#include "scriptfocus/image.hpp"
#include "scriptfocus/script.hpp"

namespace scriptfocus {

// Per-pixel darkening weight in [0, 1]: 0 on the protected target, 1 in the
// far periphery.
using AttenuationField = Grid<float>;

// Hermite step: 3t^2 - 2t^3 with t = clamp((x - e0) / (e1 - e0), 0, 1).
double smoothstep(double e0, double e1, double x);

// a(p) = smoothstep(inner, outer, D(p)), D being the seam-aware chamfer
// distance to the mask. Throws Error{kEmptyMask} for a mask with no set pixel
// and Error{kInvalidArgument} unless 0 <= inner < outer.
AttenuationField attenuation_field(const BinaryMask& mask, double feather_inner_px,
                                   double feather_outer_px);

// Temporal intensity of a cue at t (milliseconds, may be fractional): linear
// attack from start, plateau at 1, linear release into end, 0 outside
// [start, end). Ramps longer than the cue are scaled to meet in the middle.
double envelope(const Cue& cue, double t_ms);
inline double envelope(const Cue& cue, Timecode t) {
  return envelope(cue, static_cast<double>(t.millis));
}

// Vignette: channel' = round(channel * m), m = 1 - a * k with
// k = strength * e * (1 - floor_luma). `workers` splits rows across threads;
// the result does not depend on it. Throws Error{kDimsMismatch}.
Image apply_vignette(const Image& frame, const AttenuationField& field, double strength,
                     double floor_luma, double e, int workers = 1);

// Desaturation toward rounded Rec.709 luma with weight a * strength * e.
Image apply_desaturate(const Image& frame, const AttenuationField& field, double strength,
                       double e, int workers = 1);

struct EffectLayer {
  std::reference_wrapper<const AttenuationField> field;
  double strength = 0.8;
  double floor_luma = 0.15;
  double e = 1.0;
  EffectKind effect = EffectKind::kVignette;
};

// Vignette layers merge by taking the largest multiplier per pixel (a pixel
// inside any target stays bright) and are applied once; desaturation layers
// follow in the given order. Throws Error{kInvalidArgument} on an empty list
// and Error{kDimsMismatch} if a field differs from the frame.
Image combine_cues(const Image& frame, std::span<const EffectLayer> layers, int workers = 1);

// Splits [0, rows) into contiguous bands and runs fn(begin, end) on up to
// `workers` threads.
void parallel_rows(int rows, int workers, const std::function<void(int, int)>& fn);

}  // namespace scriptfocus
