#include "reference/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "scriptfocus/frame_io.hpp"
#include "scriptfocus/png_io.hpp"
#include "scriptfocus/rle.hpp"

namespace scriptfocus::testing {
namespace {

struct Ellipse {
  double cx;
  double cy;
  double rx;
  double ry;
};

Ellipse object_ellipse(char object, std::int64_t index, int width, int height) {
  const double f = static_cast<double>(index);
  if (object == 'A') {
    double u = std::fmod(0.918 + 0.0156 * f, 1.0);
    return {u * width, 0.375 * height, 0.055 * width, 0.086 * height};
  }
  return {(0.3125 - 0.0098 * f) * width, 0.664 * height, 0.066 * width, 0.1 * height};
}

bool inside(const Ellipse& e, int x, int y, int width) {
  double dx = x + 0.5 - e.cx;
  if (dx > width / 2.0) dx -= width;
  if (dx < -width / 2.0) dx += width;
  const double dy = y + 0.5 - e.cy;
  return (dx * dx) / (e.rx * e.rx) + (dy * dy) / (e.ry * e.ry) <= 1.0;
}

// Box a flat-image detector would report: the visible part on the side of
// the seam that holds the ellipse center.
BBox object_box(const Ellipse& e, int width, int height) {
  BBox b{e.cx - e.rx, e.cy - e.ry, e.cx + e.rx, e.cy + e.ry};
  b.x0 = std::clamp(b.x0, 0.0, static_cast<double>(width));
  b.x1 = std::clamp(b.x1, 0.0, static_cast<double>(width));
  b.y0 = std::clamp(b.y0, 0.0, static_cast<double>(height));
  b.y1 = std::clamp(b.y1, 0.0, static_cast<double>(height));
  return b;
}

Detection object_detection(char object, std::int64_t index, int width, int height,
                           double score, const std::string& phrase) {
  return {object_box(object_ellipse(object, index, width, height), width, height), score, phrase};
}

}  // namespace

BinaryMask synthetic_object_mask(char object, std::int64_t index, int width, int height) {
  const Ellipse e = object_ellipse(object, index, width, height);
  BinaryMask mask(width, height, 0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) mask.at(x, y) = inside(e, x, y, width) ? 1 : 0;
  }
  return mask;
}

Image synthetic_frame(std::int64_t index, int width, int height) {
  Image img(width, height);
  const Ellipse a = object_ellipse('A', index, width, height);
  const Ellipse b = object_ellipse('B', index, width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      std::uint8_t* px = img.pixel(x, y);
      if (inside(a, x, y, width)) {
        px[0] = 230;
        px[1] = 200;
        px[2] = 60;
      } else if (inside(b, x, y, width)) {
        px[0] = 60;
        px[1] = 220;
        px[2] = 230;
      } else {
        px[0] = static_cast<std::uint8_t>(40 + (x * 150) / width);
        px[1] = static_cast<std::uint8_t>(60 + (y * 120) / height);
        px[2] = static_cast<std::uint8_t>(((x / 16 + y / 16 + index) % 2) ? 140 : 90);
      }
    }
  }
  return img;
}

std::string golden_script_text() {
  return "# golden run: two overlapping cues\n"
         "00:00:00.000 --> 00:00:01.000\n"
         "prompt: Look at the sculpture of a person on the right side\n"
         "strength: 0.9\n"
         "feather: 6 30\n"
         "ramp: 0 200\n"
         "\n"
         "00:00:00.300 --> 00:00:00.900\n"
         "prompt: Look at the sculpture of a centaur on the left side\n"
         "ramp: 200 200\n";
}

Sidecar golden_fixture(int width, int height) {
  const std::string person = "sculpture of a person on the right side";
  const std::string centaur = "sculpture of a centaur on the left side";
  Sidecar fixture;

  auto add = [&](std::int64_t frame, const std::string& prompt, char object,
                 std::vector<Detection> candidates, bool with_mask) {
    SidecarRecord r;
    r.frame_index = frame;
    r.prompt = prompt;
    r.candidates = std::move(candidates);
    r.detection = select_best(r.candidates, fixture.params);
    if (r.detection && with_mask) {
      r.mask = rle_encode(synthetic_object_mask(object, frame, width, height));
    }
    r.source = RecordSource::kLive;
    fixture.records.push_back(std::move(r));
  };

  add(0, person, 'A',
      {object_detection('A', 0, width, height, 0.42, "sculpture of a person"),
       {BBox{0.1 * width, 0.5 * height, 0.2 * width, 0.7 * height}, 0.31, "person"}},
      true);
  add(3, person, 'A', {object_detection('A', 3, width, height, 0.57, "sculpture")}, true);
  add(3, centaur, 'B', {object_detection('B', 3, width, height, 0.39, "centaur")}, true);
  // Segmenter returns nothing here: the pipeline falls back to the box.
  add(6, person, 'A', {object_detection('A', 6, width, height, 0.48, "sculpture")}, false);
  // Below the 0.3 box threshold: a miss, the region is held.
  add(6, centaur, 'B', {object_detection('B', 6, width, height, 0.29, "centaur")}, true);
  {
    Detection tight = object_detection('B', 8, width, height, 0.45, "centaur");
    Detection loose = tight;
    loose.box.x0 = std::max(0.0, loose.box.x0 - 10.0);
    loose.phrase = "statue";
    add(8, centaur, 'B', {loose, tight}, true);
  }
  add(9, person, 'A', {object_detection('A', 9, width, height, 0.51, "sculpture")}, true);
  return fixture;
}

void write_synthetic_frames(const std::string& dir, int count, int width, int height) {
  std::filesystem::create_directories(dir);
  for (int i = 0; i < count; ++i) {
    write_png((std::filesystem::path(dir) / frame_filename(i)).string(),
              synthetic_frame(i, width, height));
  }
}

BinaryMask random_mask(std::mt19937& rng, int width, int height, double density) {
  std::bernoulli_distribution bit(density);
  BinaryMask mask(width, height, 0);
  for (auto& v : mask.data) v = bit(rng) ? 1 : 0;
  return mask;
}

Image random_image(std::mt19937& rng, int width, int height) {
  std::uniform_int_distribution<int> byte(0, 255);
  Image img(width, height);
  for (auto& v : img.rgb) v = static_cast<std::uint8_t>(byte(rng));
  return img;
}

}  // namespace scriptfocus::testing
