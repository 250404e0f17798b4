#include "scriptfocus/image.hpp"

#include <algorithm>

namespace scriptfocus {

std::size_t count_set(const BinaryMask& mask) {
  return static_cast<std::size_t>(std::count_if(mask.data.begin(), mask.data.end(),
                                                [](std::uint8_t v) { return v != 0; }));
}

BinaryMask shift_mask(const BinaryMask& mask, int dx, int dy) {
  if (dx == 0 && dy == 0) return mask;
  BinaryMask out(mask.width, mask.height, 0);
  const int w = mask.width;
  const int sx = ((dx % w) + w) % w;
  for (int y = 0; y < mask.height; ++y) {
    const int src_y = y - dy;
    if (src_y < 0 || src_y >= mask.height) continue;
    auto src = mask.row(src_y);
    auto dst = out.row(y);
    // dst[(x + sx) mod w] = src[x]
    std::copy(src.begin(), src.end() - sx, dst.begin() + sx);
    std::copy(src.end() - sx, src.end(), dst.begin());
  }
  return out;
}

}  // namespace scriptfocus
