#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace scriptfocus {

// Dense row-major 2-D grid.
template <typename T>
struct Grid {
  int width = 0;
  int height = 0;
  std::vector<T> data;

  Grid() = default;
  Grid(int w, int h, T fill = T{})
      : width(w), height(h), data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

  bool empty() const { return data.empty(); }
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x);
  }
  T& at(int x, int y) { return data[index(x, y)]; }
  const T& at(int x, int y) const { return data[index(x, y)]; }
  std::span<T> row(int y) { return {data.data() + index(0, y), static_cast<std::size_t>(width)}; }
  std::span<const T> row(int y) const {
    return {data.data() + index(0, y), static_cast<std::size_t>(width)};
  }

  bool operator==(const Grid&) const = default;
};

// Binary mask: 0 or 1 per pixel.
using BinaryMask = Grid<std::uint8_t>;

// Interleaved 8-bit RGB image.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  Image() = default;
  Image(int w, int h)
      : width(w), height(h), rgb(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3, 0) {}

  bool empty() const { return rgb.empty(); }
  std::uint8_t* pixel(int x, int y) {
    return rgb.data() + (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) * 3;
  }
  const std::uint8_t* pixel(int x, int y) const {
    return rgb.data() + (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) * 3;
  }

  bool operator==(const Image&) const = default;
};

std::size_t count_set(const BinaryMask& mask);

// Translates a mask by (dx, dy). Columns wrap around the longitude seam; rows
// shifted past the top or bottom are dropped and vacated rows are cleared.
BinaryMask shift_mask(const BinaryMask& mask, int dx, int dy);

}  // namespace scriptfocus
