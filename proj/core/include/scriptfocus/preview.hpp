#pragma once

#include "scriptfocus/detection.hpp"
#include "scriptfocus/image.hpp"
#include "scriptfocus/script.hpp"

namespace scriptfocus {

// Detection panel: mask pixels blended 40% toward a tint, then the box drawn
// as a 3 px outline inside its bounds.
Image render_detection_panel(const Image& frame, const BBox& box, const BinaryMask& mask);

// Effect panel: the cue's effect at full envelope (e = 1), exactly as the
// pipeline composites a single cue.
Image render_effect_panel(const Image& frame, const BinaryMask& mask, const Cue& cue,
                          EffectKind effect);

}  // namespace scriptfocus
