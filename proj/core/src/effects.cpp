#include "scriptfocus/effects.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "scriptfocus/error.hpp"
#include "scriptfocus/geometry.hpp"

namespace scriptfocus {
namespace {

void check_dims(const Image& frame, const AttenuationField& field) {
  if (frame.width != field.width || frame.height != field.height) {
    throw Error(ErrorCode::kDimsMismatch,
                "field " + std::to_string(field.width) + "x" + std::to_string(field.height) +
                    " does not match frame " + std::to_string(frame.width) + "x" +
                    std::to_string(frame.height));
  }
}

inline std::uint8_t scale_channel(std::uint8_t c, double m) {
  return static_cast<std::uint8_t>(std::lround(c * m));
}

inline std::uint8_t rec709_gray(const std::uint8_t* px) {
  return static_cast<std::uint8_t>(
      std::lround(0.2126 * px[0] + 0.7152 * px[1] + 0.0722 * px[2]));
}

inline std::uint8_t lerp_channel(std::uint8_t c, std::uint8_t gray, double w) {
  return static_cast<std::uint8_t>(std::lround(c + (gray - c) * w));
}

void desaturate_rows(const AttenuationField& field, double s, Image& out, int y0, int y1) {
  for (int y = y0; y < y1; ++y) {
    auto a_row = field.row(y);
    std::uint8_t* px = out.pixel(0, y);
    for (int x = 0; x < out.width; ++x, px += 3) {
      const float a = a_row[static_cast<std::size_t>(x)];
      if (a == 0.0f) continue;
      const double w = static_cast<double>(a) * s;
      const std::uint8_t gray = rec709_gray(px);
      px[0] = lerp_channel(px[0], gray, w);
      px[1] = lerp_channel(px[1], gray, w);
      px[2] = lerp_channel(px[2], gray, w);
    }
  }
}

}  // namespace

void parallel_rows(int rows, int workers, const std::function<void(int, int)>& fn) {
  workers = std::clamp(workers, 1, std::max(rows, 1));
  if (workers == 1) {
    fn(0, rows);
    return;
  }
  std::vector<std::jthread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  const int band = (rows + workers - 1) / workers;
  for (int begin = 0; begin < rows; begin += band) {
    const int end = std::min(rows, begin + band);
    threads.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
}

double smoothstep(double e0, double e1, double x) {
  const double t = std::clamp((x - e0) / (e1 - e0), 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

AttenuationField attenuation_field(const BinaryMask& mask, double feather_inner_px,
                                   double feather_outer_px) {
  if (!(feather_inner_px >= 0.0 && feather_outer_px > feather_inner_px)) {
    throw Error(ErrorCode::kInvalidArgument, "feather requires 0 <= inner < outer");
  }
  const Grid<float> distance = wrap_distance_transform(mask);
  AttenuationField field(distance.width, distance.height, 0.0f);
  for (std::size_t i = 0; i < distance.data.size(); ++i) {
    field.data[i] = static_cast<float>(
        smoothstep(feather_inner_px, feather_outer_px, static_cast<double>(distance.data[i])));
  }
  return field;
}

double envelope(const Cue& cue, double t_ms) {
  const double start = static_cast<double>(cue.start.millis);
  const double end = static_cast<double>(cue.end.millis);
  if (t_ms < start || t_ms >= end) return 0.0;
  double attack = static_cast<double>(cue.attack_ms);
  double release = static_cast<double>(cue.release_ms);
  const double length = end - start;
  if (attack + release > length) {
    const double scale = length / (attack + release);
    attack *= scale;
    release *= scale;
  }
  double e = 1.0;
  if (attack > 0.0) e = std::min(e, (t_ms - start) / attack);
  if (release > 0.0) e = std::min(e, (end - t_ms) / release);
  return std::clamp(e, 0.0, 1.0);
}

Image apply_vignette(const Image& frame, const AttenuationField& field, double strength,
                     double floor_luma, double e, int workers) {
  check_dims(frame, field);
  const double k = strength * e * (1.0 - floor_luma);
  Image out = frame;
  if (k == 0.0) return out;
  parallel_rows(frame.height, workers, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      auto a_row = field.row(y);
      std::uint8_t* px = out.pixel(0, y);
      for (int x = 0; x < frame.width; ++x, px += 3) {
        const float a = a_row[static_cast<std::size_t>(x)];
        if (a == 0.0f) continue;
        const double m = 1.0 - static_cast<double>(a) * k;
        px[0] = scale_channel(px[0], m);
        px[1] = scale_channel(px[1], m);
        px[2] = scale_channel(px[2], m);
      }
    }
  });
  return out;
}

Image apply_desaturate(const Image& frame, const AttenuationField& field, double strength,
                       double e, int workers) {
  check_dims(frame, field);
  const double s = strength * e;
  Image out = frame;
  if (s == 0.0) return out;
  parallel_rows(frame.height, workers,
                [&](int y0, int y1) { desaturate_rows(field, s, out, y0, y1); });
  return out;
}

Image combine_cues(const Image& frame, std::span<const EffectLayer> layers, int workers) {
  if (layers.empty()) throw Error(ErrorCode::kInvalidArgument, "combine_cues needs a layer");
  for (const EffectLayer& layer : layers) check_dims(frame, layer.field.get());

  struct VignetteTerm {
    const AttenuationField* field;
    double k;
  };
  std::vector<VignetteTerm> vignettes;
  bool vignette_identity = false;
  for (const EffectLayer& layer : layers) {
    if (layer.effect != EffectKind::kVignette) continue;
    const double k = layer.strength * layer.e * (1.0 - layer.floor_luma);
    vignettes.push_back({&layer.field.get(), k});
    // m = 1 everywhere for this layer, so the max is 1 too.
    vignette_identity |= k == 0.0;
  }
  if (vignette_identity) vignettes.clear();

  Image out = frame;
  parallel_rows(frame.height, workers, [&](int y0, int y1) {
    if (!vignettes.empty()) {
      for (int y = y0; y < y1; ++y) {
        std::uint8_t* px = out.pixel(0, y);
        const std::size_t base = frame.width * static_cast<std::size_t>(y);
        for (int x = 0; x < frame.width; ++x, px += 3) {
          double m = 0.0;
          for (const VignetteTerm& v : vignettes) {
            const float a = v.field->data[base + static_cast<std::size_t>(x)];
            m = std::max(m, 1.0 - static_cast<double>(a) * v.k);
            if (m == 1.0) break;
          }
          if (m == 1.0) continue;
          px[0] = scale_channel(px[0], m);
          px[1] = scale_channel(px[1], m);
          px[2] = scale_channel(px[2], m);
        }
      }
    }
    for (const EffectLayer& layer : layers) {
      if (layer.effect != EffectKind::kDesaturate) continue;
      const double s = layer.strength * layer.e;
      if (s == 0.0) continue;
      desaturate_rows(layer.field.get(), s, out, y0, y1);
    }
  });
  return out;
}

}  // namespace scriptfocus
