#include "scriptfocus/rle.hpp"

#include <algorithm>
#include <string>

#include "scriptfocus/error.hpp"

namespace scriptfocus {

MaskRLE rle_encode(const BinaryMask& mask) {
  MaskRLE rle;
  rle.height = mask.height;
  rle.width = mask.width;
  std::uint8_t current = 0;
  std::uint32_t run = 0;
  for (std::uint8_t v : mask.data) {
    const std::uint8_t bit = v != 0 ? 1 : 0;
    if (bit != current) {
      rle.counts.push_back(run);
      run = 0;
      current = bit;
    }
    ++run;
  }
  rle.counts.push_back(run);
  return rle;
}

BinaryMask rle_decode(const MaskRLE& rle) {
  if (rle.width < 0 || rle.height < 0) {
    throw Error(ErrorCode::kMalformedRle, "negative mask dimensions");
  }
  const std::uint64_t total = static_cast<std::uint64_t>(rle.width) * static_cast<std::uint64_t>(rle.height);
  std::uint64_t sum = 0;
  for (std::uint32_t c : rle.counts) sum += c;
  if (sum != total) {
    throw Error(ErrorCode::kMalformedRle, "counts sum to " + std::to_string(sum) + ", expected " +
                                              std::to_string(total));
  }
  BinaryMask mask(rle.width, rle.height, 0);
  std::size_t pos = 0;
  std::uint8_t value = 0;
  for (std::uint32_t c : rle.counts) {
    if (value != 0) std::fill_n(mask.data.begin() + static_cast<std::ptrdiff_t>(pos), c, std::uint8_t{1});
    pos += c;
    value ^= 1;
  }
  return mask;
}

std::uint64_t rle_area(const MaskRLE& rle) {
  std::uint64_t area = 0;
  for (std::size_t i = 1; i < rle.counts.size(); i += 2) area += rle.counts[i];
  return area;
}

}  // namespace scriptfocus
