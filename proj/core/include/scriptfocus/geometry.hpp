#pragma once

#include <vector>

#include "scriptfocus/image.hpp"

namespace scriptfocus {

// Full equirectangular frame: width == 2 * height.
class FrameDims {
 public:
  // Throws Error{kInvalidArgument} unless w == 2h and h > 0.
  FrameDims(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }

  bool operator==(const FrameDims&) const = default;

 private:
  int width_;
  int height_;
};

// Degrees. lat in [-90, 90], lon in [-180, 180).
struct SpherePoint {
  double lat = 0.0;
  double lon = 0.0;
};

// Wraps any longitude into [-180, 180).
double wrap_longitude(double lon_deg);

struct PixelPos {
  int x = 0;
  int y = 0;
  bool operator==(const PixelPos&) const = default;
};

// Sub-pixel frame coordinates, origin top-left; 0 <= x0 < x1 <= W and
// 0 <= y0 < y1 <= H. Raw detector boxes may extend past x = W; see
// split_wrapped_bbox.
struct BBox {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  double center_x() const { return 0.5 * (x0 + x1); }
  double center_y() const { return 0.5 * (y0 + y1); }

  bool operator==(const BBox&) const = default;
};

// Samples the pixel center. Throws Error{kOutOfFrame}.
SpherePoint pixel_to_sphere(PixelPos px, const FrameDims& dims);

// Nearest pixel whose center maps to `p`, clamped to the frame.
PixelPos sphere_to_pixel(SpherePoint p, const FrameDims& dims);

// Great-circle angle in degrees, haversine form.
double angular_distance(SpherePoint a, SpherePoint b);

// Splits a raw box whose right edge may cross the seam (x1 > W) into one or
// two in-frame boxes. Throws Error{kDegenerateBox} on zero area and
// Error{kOutOfFrame} when the rows or the start column lie outside the frame.
std::vector<BBox> split_wrapped_bbox(const BBox& raw, const FrameDims& dims);

// Approximate Euclidean distance (pixels) from every pixel to the nearest set
// pixel, treating columns 0 and W-1 as adjacent. Two-pass 3-4 chamfer over a
// horizontally triple-tiled copy of the mask, normalized by 3. Rows do not
// wrap. Throws Error{kEmptyMask} when no pixel is set.
Grid<float> wrap_distance_transform(const BinaryMask& mask);

}  // namespace scriptfocus
