#include "scriptfocus/tracking.hpp"

#include <gtest/gtest.h>

#include "scriptfocus/error.hpp"

namespace scriptfocus {
namespace {

constexpr int kW = 64;
constexpr int kH = 32;

Cue test_cue() {
  Cue c;
  c.id = "cue-1";
  c.prompt = "sculpture of a person on the right side";
  c.start = {0};
  c.end = {10000};
  return c;
}

SidecarRecord hit(std::int64_t frame, BBox box, double score = 0.5) {
  SidecarRecord r;
  r.frame_index = frame;
  r.prompt = test_cue().prompt;
  r.detection = Detection{box, score, "person"};
  r.candidates = {*r.detection};
  r.mask = rle_encode(box_fill_mask(box, kW, kH));
  return r;
}

SidecarRecord miss(std::int64_t frame) {
  SidecarRecord r;
  r.frame_index = frame;
  r.prompt = test_cue().prompt;
  return r;
}

Sidecar fixture_of(std::vector<SidecarRecord> records) {
  Sidecar s;
  s.records = std::move(records);
  return s;
}

TEST(TrackingTest, FreshHitInitializesSmoothedCenter) {
  FixtureBackend backend(fixture_of({hit(0, {10, 4, 20, 12})}));
  const Image frame(kW, kH);
  const KeyframeStep step = step_keyframe(std::nullopt, {0, frame}, test_cue(), backend, {});
  EXPECT_EQ(step.state.status, RegionStatus::kActive);
  EXPECT_EQ(step.state.smoothed_center, (Point2{15, 8}));
  EXPECT_EQ(step.state.mask_center, (Point2{15, 8}));
  ASSERT_TRUE(step.record);
  EXPECT_EQ(step.record->cue_id, "cue-1");
  EXPECT_EQ(step.record->source, RecordSource::kFixture);
}

TEST(TrackingTest, MissWithinGraceHoldsMask) {
  FixtureBackend backend(fixture_of({hit(0, {10, 4, 20, 12}), miss(15)}));
  const Image frame(kW, kH);
  const TrackingConfig cfg;
  const auto s0 = step_keyframe(std::nullopt, {0, frame}, test_cue(), backend, cfg).state;
  const auto s1 = step_keyframe(s0, {15, frame}, test_cue(), backend, cfg).state;
  EXPECT_EQ(s1.status, RegionStatus::kHeld);
  EXPECT_EQ(s1.mask, s0.mask);
  EXPECT_EQ(s1.held_keyframes, 1);
  const auto region = region_for_frame(s1, 20);
  ASSERT_TRUE(region);
  EXPECT_EQ(region->mask, rle_decode(*s0.mask));
}

TEST(TrackingTest, GraceExhaustedIsLost) {
  const Cue cue = test_cue();
  const TrackingConfig cfg;
  auto s = apply_record(std::nullopt, cue, hit(0, {10, 4, 20, 12}), kW, cfg);
  s = apply_record(s, cue, miss(15), kW, cfg);
  EXPECT_EQ(s.status, RegionStatus::kHeld);
  s = apply_record(s, cue, miss(30), kW, cfg);
  EXPECT_EQ(s.status, RegionStatus::kHeld);
  s = apply_record(s, cue, std::nullopt, kW, cfg);
  EXPECT_EQ(s.status, RegionStatus::kLost);
  EXPECT_FALSE(region_for_frame(s, 45));
  s = apply_record(s, cue, hit(60, {40, 4, 50, 12}), kW, cfg);
  EXPECT_EQ(s.status, RegionStatus::kActive);
  // Re-acquired after a loss: no smoothing toward the stale center.
  EXPECT_EQ(s.smoothed_center, (Point2{45, 8}));
}

TEST(TrackingTest, NeverFoundIsNotRendered) {
  auto s = apply_record(std::nullopt, test_cue(), miss(0), kW, {});
  EXPECT_EQ(s.status, RegionStatus::kHeld);
  EXPECT_FALSE(region_for_frame(s, 0));
}

TEST(TrackingTest, EmaSmoothsCenter) {
  const Cue cue = test_cue();
  const TrackingConfig cfg;
  auto s = apply_record(std::nullopt, cue, hit(0, {10, 4, 20, 12}), kW, cfg);
  s = apply_record(s, cue, hit(15, {16, 8, 26, 16}), kW, cfg);
  EXPECT_EQ(s.smoothed_center, (Point2{18, 10}));
  EXPECT_EQ(s.mask_center, (Point2{21, 12}));
  EXPECT_EQ(region_shift(s, kW), (RegionShift{-3, -2}));
}

TEST(TrackingTest, EmaTakesShortWayAroundSeam) {
  const Cue cue = test_cue();
  auto s = apply_record(std::nullopt, cue, hit(0, {58, 4, 62, 8}), kW, {});
  s = apply_record(s, cue, hit(15, {2, 4, 6, 8}), kW, {});
  // 60 -> 4 is 8 px to the right across the seam; halfway is 0.
  EXPECT_DOUBLE_EQ(s.smoothed_center.x, 0.0);
  EXPECT_EQ(region_shift(s, kW), (RegionShift{-4, 0}));
}

TEST(TrackingTest, ZeroDeltaLeavesMaskUnchanged) {
  auto s = apply_record(std::nullopt, test_cue(), hit(0, {10, 4, 20, 12}), kW, {});
  const auto region = region_for_frame(s, 0);
  ASSERT_TRUE(region);
  EXPECT_EQ(region->mask, rle_decode(*s.mask));
}

TEST(TrackingTest, ShiftByThreeWraps) {
  RegionState s;
  s.status = RegionStatus::kActive;
  BinaryMask mask(kW, kH, 0);
  mask.at(62, 5) = 1;
  mask.at(10, 6) = 1;
  s.mask = rle_encode(mask);
  s.detection = Detection{{0, 0, 1, 1}, 0.5, ""};
  s.mask_center = {30, 10};
  s.smoothed_center = {33, 10};
  EXPECT_EQ(region_shift(s, kW), (RegionShift{3, 0}));
  const auto region = region_for_frame(s, 7);
  ASSERT_TRUE(region);
  BinaryMask expected(kW, kH, 0);
  expected.at(1, 5) = 1;
  expected.at(13, 6) = 1;
  EXPECT_EQ(region->mask, expected);
}

TEST(TrackingTest, EmptySegmentationFallsBackToBox) {
  SidecarRecord r = hit(0, {10.2, 4, 20.7, 12});
  r.mask.reset();
  FixtureBackend backend(fixture_of({r}));
  const Image frame(kW, kH);
  const auto rec = query_keyframe({0, frame}, test_cue(), backend, {});
  ASSERT_TRUE(rec);
  EXPECT_EQ(rec->source, RecordSource::kFallbackBox);
  ASSERT_TRUE(rec->mask);
  EXPECT_EQ(rle_decode(*rec->mask), box_fill_mask({10.2, 4, 20.7, 12}, kW, kH));
}

TEST(BoxFillTest, PixelCentersInsideBox) {
  const BinaryMask m = box_fill_mask({10.2, 4.0, 20.7, 6.5}, kW, kH);
  // Columns with centers in [10.2, 20.7): 10..20; rows 4..5 (6.5 excluded).
  for (int y = 0; y < kH; ++y) {
    for (int x = 0; x < kW; ++x) {
      EXPECT_EQ(m.at(x, y), (x >= 10 && x <= 20 && y >= 4 && y <= 5) ? 1 : 0) << x << "," << y;
    }
  }
}

TEST(BoxFillTest, WrapsAcrossSeam) {
  const BinaryMask m = box_fill_mask({60, 0, 68, 1}, kW, kH);
  EXPECT_EQ(count_set(m), 8u);
  EXPECT_EQ(m.at(63, 0), 1);
  EXPECT_EQ(m.at(0, 0), 1);
  EXPECT_EQ(m.at(3, 0), 1);
  EXPECT_EQ(m.at(4, 0), 0);
}

TEST(BoxFillTest, SubPixelBoxKeepsCenterPixel) {
  const BinaryMask m = box_fill_mask({10.6, 3.6, 10.9, 3.9}, kW, kH);
  EXPECT_EQ(count_set(m), 1u);
  EXPECT_EQ(m.at(10, 3), 1);
}

}  // namespace
}  // namespace scriptfocus
