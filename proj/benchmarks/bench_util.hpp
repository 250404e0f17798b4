#pragma once

#include <random>

#include "scriptfocus/image.hpp"

namespace scriptfocus::bench {

// A filled ellipse straddling the longitude seam, roughly the footprint of a
// detected object in an equirectangular frame.
inline BinaryMask seam_object(int width, int height) {
  BinaryMask mask(width, height, 0);
  const double rx = width * 0.06, ry = height * 0.15;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double dx = x + 0.5;
      if (dx > width / 2.0) dx -= width;
      const double dy = y + 0.5 - height * 0.55;
      if ((dx * dx) / (rx * rx) + (dy * dy) / (ry * ry) <= 1.0) mask.at(x, y) = 1;
    }
  }
  return mask;
}

inline Image noise_image(int width, int height, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> byte(0, 255);
  Image image(width, height);
  for (auto& v : image.rgb) v = static_cast<std::uint8_t>(byte(rng));
  return image;
}

}  // namespace scriptfocus::bench
