#pragma once

#include <cstdint>
#include <vector>

#include "scriptfocus/image.hpp"

namespace scriptfocus {

// Run-length encoded binary mask over the row-major flattened grid. Runs
// alternate 0,1,0,... and always start with a (possibly empty) zero run;
// the counts sum to width * height.
struct MaskRLE {
  int height = 0;
  int width = 0;
  std::vector<std::uint32_t> counts;

  bool operator==(const MaskRLE&) const = default;
};

MaskRLE rle_encode(const BinaryMask& mask);

// Throws Error{kMalformedRle} when the counts do not cover the grid exactly.
BinaryMask rle_decode(const MaskRLE& rle);

// Number of set pixels without decoding.
std::uint64_t rle_area(const MaskRLE& rle);

}  // namespace scriptfocus
