#include "scriptfocus/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "reference/oracles.hpp"
#include "reference/synthetic.hpp"
#include "scriptfocus/error.hpp"

namespace scriptfocus {
namespace {

using testing::brute_force_chamfer;
using testing::exact_wrap_distance;
using testing::random_mask;

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

TEST(FrameDimsTest, RequiresTwoToOne) {
  EXPECT_NO_THROW(FrameDims(3840, 1920));
  EXPECT_EQ(code_of([] { FrameDims(100, 100); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { FrameDims(0, 0); }), ErrorCode::kInvalidArgument);
}

TEST(ProjectionTest, PixelCentersToDegrees) {
  const FrameDims dims(360, 180);
  SpherePoint p = pixel_to_sphere({179, 89}, dims);
  EXPECT_DOUBLE_EQ(p.lon, -0.5);
  EXPECT_DOUBLE_EQ(p.lat, 0.5);
  p = pixel_to_sphere({0, 0}, dims);
  EXPECT_DOUBLE_EQ(p.lon, -179.5);
  EXPECT_DOUBLE_EQ(p.lat, 89.5);
}

TEST(ProjectionTest, OutOfFramePixel) {
  const FrameDims dims(3840, 1920);
  EXPECT_EQ(code_of([&] { pixel_to_sphere({3840, 0}, dims); }), ErrorCode::kOutOfFrame);
  EXPECT_EQ(code_of([&] { pixel_to_sphere({0, -1}, dims); }), ErrorCode::kOutOfFrame);
  EXPECT_EQ(code_of([&] { pixel_to_sphere({0, 1920}, dims); }), ErrorCode::kOutOfFrame);
}

TEST(ProjectionTest, SphereToPixel) {
  const FrameDims dims(360, 180);
  EXPECT_EQ(sphere_to_pixel({0.5, -0.5}, dims), (PixelPos{179, 89}));
  EXPECT_EQ(sphere_to_pixel({90.0, 12.0}, dims).y, 0);
  EXPECT_EQ(sphere_to_pixel({90.0, -180.0}, dims).y, 0);
  EXPECT_EQ(sphere_to_pixel({-90.0, 0.0}, dims).y, 179);
  // Longitudes outside [-180, 180) wrap.
  EXPECT_EQ(sphere_to_pixel({0.5, 359.5}, dims), (PixelPos{179, 89}));
}

TEST(ProjectionTest, ExhaustiveRoundTrip) {
  const FrameDims dims(64, 32);
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 64; ++x) {
      EXPECT_EQ(sphere_to_pixel(pixel_to_sphere({x, y}, dims), dims), (PixelPos{x, y}));
    }
  }
}

TEST(WrapLongitudeTest, Range) {
  EXPECT_DOUBLE_EQ(wrap_longitude(180.0), -180.0);
  EXPECT_DOUBLE_EQ(wrap_longitude(-180.0), -180.0);
  EXPECT_DOUBLE_EQ(wrap_longitude(190.0), -170.0);
  EXPECT_DOUBLE_EQ(wrap_longitude(-190.0), 170.0);
  EXPECT_DOUBLE_EQ(wrap_longitude(720.5), 0.5);
}

TEST(AngularDistanceTest, Examples) {
  EXPECT_DOUBLE_EQ(angular_distance({10, 20}, {10, 20}), 0.0);
  EXPECT_NEAR(angular_distance({0, 0}, {0, 90}), 90.0, 1e-12);
  EXPECT_NEAR(angular_distance({45, 0}, {-45, 180}), 180.0, 1e-9);
}

TEST(AngularDistanceTest, Properties) {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> lat(-90.0, 90.0);
  std::uniform_real_distribution<double> lon(-180.0, 180.0);
  for (int i = 0; i < 2000; ++i) {
    const SpherePoint a{lat(rng), lon(rng)};
    const SpherePoint b{lat(rng), lon(rng)};
    const SpherePoint c{lat(rng), lon(rng)};
    const double ab = angular_distance(a, b);
    EXPECT_DOUBLE_EQ(ab, angular_distance(b, a));
    EXPECT_LE(angular_distance(a, c), ab + angular_distance(b, c) + 1e-9);
    const double shift = lon(rng);
    const double shifted = angular_distance({a.lat, a.lon + shift}, {b.lat, b.lon + shift});
    EXPECT_NEAR(shifted, ab, 1e-9);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 180.0);
  }
}

TEST(SplitBoxTest, NoWrap) {
  const FrameDims dims(3840, 1920);
  const auto boxes = split_wrapped_bbox({100, 0, 400, 200}, dims);
  ASSERT_EQ(boxes.size(), 1u);
  EXPECT_EQ(boxes[0], (BBox{100, 0, 400, 200}));
}

TEST(SplitBoxTest, AcrossSeam) {
  const FrameDims dims(3840, 1920);
  const auto boxes = split_wrapped_bbox({3700, 0, 3940, 200}, dims);
  ASSERT_EQ(boxes.size(), 2u);
  EXPECT_EQ(boxes[0], (BBox{3700, 0, 3840, 200}));
  EXPECT_EQ(boxes[1], (BBox{0, 0, 100, 200}));
}

TEST(SplitBoxTest, Errors) {
  const FrameDims dims(3840, 1920);
  EXPECT_EQ(code_of([&] { split_wrapped_bbox({100, 0, 100, 200}, dims); }), ErrorCode::kDegenerateBox);
  EXPECT_EQ(code_of([&] { split_wrapped_bbox({100, 50, 200, 50}, dims); }), ErrorCode::kDegenerateBox);
  EXPECT_EQ(code_of([&] { split_wrapped_bbox({3840, 0, 3900, 200}, dims); }), ErrorCode::kOutOfFrame);
  EXPECT_EQ(code_of([&] { split_wrapped_bbox({0, 0, 100, 1921}, dims); }), ErrorCode::kOutOfFrame);
  EXPECT_EQ(code_of([&] { split_wrapped_bbox({10, 0, 3900, 10}, dims); }), ErrorCode::kOutOfFrame);
}

TEST(DistanceTransformTest, CenterOfThreeByThree) {
  BinaryMask mask(3, 3, 0);
  mask.at(1, 1) = 1;
  const Grid<float> d = wrap_distance_transform(mask);
  EXPECT_EQ(d.at(1, 1), 0.0f);
  EXPECT_EQ(d.at(0, 1), 1.0f);
  EXPECT_EQ(d.at(2, 1), 1.0f);
  EXPECT_EQ(d.at(1, 0), 1.0f);
  EXPECT_EQ(d.at(1, 2), 1.0f);
  for (auto [x, y] : {std::pair{0, 0}, {2, 0}, {0, 2}, {2, 2}}) {
    EXPECT_FLOAT_EQ(d.at(x, y), 4.0f / 3.0f);
  }
}

TEST(DistanceTransformTest, WrapsAcrossSeam) {
  BinaryMask mask(8, 1, 0);
  mask.at(0, 0) = 1;
  const Grid<float> d = wrap_distance_transform(mask);
  EXPECT_EQ(d.at(7, 0), 1.0f);
  EXPECT_EQ(d.at(4, 0), 4.0f);
  EXPECT_EQ(d.at(1, 0), 1.0f);
}

TEST(DistanceTransformTest, RowsDoNotWrap) {
  BinaryMask mask(4, 8, 0);
  mask.at(0, 0) = 1;
  const Grid<float> d = wrap_distance_transform(mask);
  EXPECT_EQ(d.at(0, 7), 7.0f);
}

TEST(DistanceTransformTest, EmptyMask) {
  EXPECT_EQ(code_of([] { wrap_distance_transform(BinaryMask(8, 4, 0)); }), ErrorCode::kEmptyMask);
}

TEST(DistanceTransformTest, MatchesClosedFormChamfer) {
  std::mt19937 rng(2024);
  for (int i = 0; i < 40; ++i) {
    const int w = 8 + static_cast<int>(rng() % 57);
    const int h = 4 + static_cast<int>(rng() % 40);
    const double density = (i % 4 == 0) ? 0.002 : 0.03;
    BinaryMask mask = random_mask(rng, w, h, density);
    if (count_set(mask) == 0) mask.at(static_cast<int>(rng() % w), static_cast<int>(rng() % h)) = 1;
    EXPECT_EQ(wrap_distance_transform(mask), brute_force_chamfer(mask)) << w << "x" << h;
  }
}

TEST(DistanceTransformTest, WithinBoundOfExactDistance) {
  std::mt19937 rng(7);
  for (int i = 0; i < 25; ++i) {
    BinaryMask mask = random_mask(rng, 64, 64, 0.004 + 0.002 * (i % 5));
    if (count_set(mask) == 0) mask.at(5, 5) = 1;
    const Grid<float> d = wrap_distance_transform(mask);
    const Grid<double> exact = exact_wrap_distance(mask);
    for (std::size_t k = 0; k < d.data.size(); ++k) {
      const double err = std::abs(d.data[k] - exact.data[k]);
      ASSERT_LE(err, 0.085 * std::max(exact.data[k], 1.0)) << "mask " << i << " pixel " << k;
    }
  }
}

TEST(DistanceTransformTest, ZeroExactlyOnSetPixels) {
  std::mt19937 rng(11);
  for (int i = 0; i < 20; ++i) {
    BinaryMask mask = random_mask(rng, 40, 20, 0.1);
    mask.at(0, 0) = 1;
    const Grid<float> d = wrap_distance_transform(mask);
    for (std::size_t k = 0; k < d.data.size(); ++k) {
      EXPECT_EQ(d.data[k] == 0.0f, mask.data[k] == 1);
    }
  }
}

TEST(DistanceTransformTest, RotationInvariant) {
  std::mt19937 rng(3);
  for (int i = 0; i < 20; ++i) {
    BinaryMask mask = random_mask(rng, 48, 24, 0.01);
    mask.at(47, 12) = 1;
    const int shift = static_cast<int>(rng() % 48);
    const Grid<float> d = wrap_distance_transform(mask);
    const Grid<float> rotated = wrap_distance_transform(shift_mask(mask, shift, 0));
    for (int y = 0; y < 24; ++y) {
      for (int x = 0; x < 48; ++x) {
        ASSERT_EQ(rotated.at((x + shift) % 48, y), d.at(x, y));
      }
    }
  }
}

TEST(ShiftMaskTest, WrapsColumnsDropsRows) {
  BinaryMask mask(4, 3, 0);
  mask.at(3, 0) = 1;
  mask.at(1, 2) = 1;
  const BinaryMask s = shift_mask(mask, 2, 1);
  EXPECT_EQ(s.at(1, 1), 1);
  EXPECT_EQ(count_set(s), 1u);
  const BinaryMask left = shift_mask(mask, -5, 0);
  EXPECT_EQ(left.at(2, 0), 1);
  EXPECT_EQ(left.at(0, 2), 1);
}

}  // namespace
}  // namespace scriptfocus
