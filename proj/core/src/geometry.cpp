#include "scriptfocus/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

#include "scriptfocus/error.hpp"

namespace scriptfocus {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

}  // namespace

FrameDims::FrameDims(int width, int height) : width_(width), height_(height) {
  if (height <= 0 || width != 2 * height) {
    throw Error(ErrorCode::kInvalidArgument,
                "equirectangular frame must be 2:1, got " + std::to_string(width) + "x" +
                    std::to_string(height));
  }
}

double wrap_longitude(double lon_deg) {
  double wrapped = std::fmod(lon_deg + 180.0, 360.0);
  if (wrapped < 0.0) wrapped += 360.0;
  wrapped -= 180.0;
  return wrapped >= 180.0 ? -180.0 : wrapped;
}

SpherePoint pixel_to_sphere(PixelPos px, const FrameDims& dims) {
  if (px.x < 0 || px.x >= dims.width() || px.y < 0 || px.y >= dims.height()) {
    throw Error(ErrorCode::kOutOfFrame, "pixel (" + std::to_string(px.x) + ", " +
                                            std::to_string(px.y) + ") outside frame");
  }
  SpherePoint p;
  p.lon = (px.x + 0.5) / dims.width() * 360.0 - 180.0;
  p.lat = 90.0 - (px.y + 0.5) / dims.height() * 180.0;
  return p;
}

PixelPos sphere_to_pixel(SpherePoint p, const FrameDims& dims) {
  const double lon = wrap_longitude(p.lon);
  const double lat = std::clamp(p.lat, -90.0, 90.0);
  const auto x = static_cast<int>(std::floor((lon + 180.0) / 360.0 * dims.width()));
  const auto y = static_cast<int>(std::floor((90.0 - lat) / 180.0 * dims.height()));
  return {std::clamp(x, 0, dims.width() - 1), std::clamp(y, 0, dims.height() - 1)};
}

double angular_distance(SpherePoint a, SpherePoint b) {
  const double lat1 = a.lat * kDegToRad;
  const double lat2 = b.lat * kDegToRad;
  const double dlat = lat2 - lat1;
  const double dlon = (b.lon - a.lon) * kDegToRad;
  const double s_lat = std::sin(dlat / 2.0);
  const double s_lon = std::sin(dlon / 2.0);
  double h = s_lat * s_lat + std::cos(lat1) * std::cos(lat2) * s_lon * s_lon;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * std::asin(std::sqrt(h)) / kDegToRad;
}

std::vector<BBox> split_wrapped_bbox(const BBox& raw, const FrameDims& dims) {
  const double w = dims.width();
  const double h = dims.height();
  if (!(raw.x1 > raw.x0) || !(raw.y1 > raw.y0)) {
    throw Error(ErrorCode::kDegenerateBox, "box has zero area");
  }
  if (raw.y0 < 0.0 || raw.y1 > h || raw.x0 < 0.0 || raw.x0 >= w || raw.width() > w) {
    throw Error(ErrorCode::kOutOfFrame, "box does not fit the frame");
  }
  if (raw.x1 <= w) return {raw};
  return {BBox{raw.x0, raw.y0, w, raw.y1}, BBox{0.0, raw.y0, raw.x1 - w, raw.y1}};
}

Grid<float> wrap_distance_transform(const BinaryMask& mask) {
  const int w = mask.width;
  const int h = mask.height;
  if (w <= 0 || h <= 0 || count_set(mask) == 0) {
    throw Error(ErrorCode::kEmptyMask, "distance transform needs at least one set pixel");
  }
  constexpr std::int32_t kOrtho = 3;
  constexpr std::int32_t kDiag = 4;
  constexpr std::int32_t kInf = std::numeric_limits<std::int32_t>::max() / 2;

  const int tw = 3 * w;
  Grid<std::int32_t> d(tw, h, kInf);
  for (int y = 0; y < h; ++y) {
    auto src = mask.row(y);
    auto dst = d.row(y);
    for (int x = 0; x < tw; ++x) {
      if (src[static_cast<std::size_t>(x % w)] != 0) dst[static_cast<std::size_t>(x)] = 0;
    }
  }

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < tw; ++x) {
      std::int32_t v = d.at(x, y);
      if (x > 0) v = std::min(v, d.at(x - 1, y) + kOrtho);
      if (y > 0) {
        v = std::min(v, d.at(x, y - 1) + kOrtho);
        if (x > 0) v = std::min(v, d.at(x - 1, y - 1) + kDiag);
        if (x + 1 < tw) v = std::min(v, d.at(x + 1, y - 1) + kDiag);
      }
      d.at(x, y) = v;
    }
  }
  for (int y = h - 1; y >= 0; --y) {
    for (int x = tw - 1; x >= 0; --x) {
      std::int32_t v = d.at(x, y);
      if (x + 1 < tw) v = std::min(v, d.at(x + 1, y) + kOrtho);
      if (y + 1 < h) {
        v = std::min(v, d.at(x, y + 1) + kOrtho);
        if (x + 1 < tw) v = std::min(v, d.at(x + 1, y + 1) + kDiag);
        if (x > 0) v = std::min(v, d.at(x - 1, y + 1) + kDiag);
      }
      d.at(x, y) = v;
    }
  }

  Grid<float> out(w, h, 0.0f);
  for (int y = 0; y < h; ++y) {
    auto src = d.row(y);
    auto dst = out.row(y);
    for (int x = 0; x < w; ++x) {
      dst[static_cast<std::size_t>(x)] =
          static_cast<float>(src[static_cast<std::size_t>(x + w)]) / 3.0f;
    }
  }
  return out;
}

}  // namespace scriptfocus
