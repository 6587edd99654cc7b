#include "lidartrack/detection.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lidartrack/errors.hpp"
#include "lidartrack/synth.hpp"

namespace lidartrack {
namespace {

TEST(FitBox, UnitCubeCorners) {
  std::vector<Vec3> corners;
  for (int i = 0; i < 8; ++i) corners.push_back({double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)});
  const auto d = fit_box(corners);
  EXPECT_EQ(d.center, (Vec3{0.5, 0.5, 0.5}));
  EXPECT_EQ(d.length, 1.0);
  EXPECT_EQ(d.width, 1.0);
  EXPECT_EQ(d.height, 1.0);
  EXPECT_EQ(d.n_points, 8u);
}

TEST(FitBox, SinglePointIsDegenerate) {
  const std::vector<Vec3> one = {{2, 3, 4}};
  const auto d = fit_box(one);
  EXPECT_EQ(d.center, (Vec3{2, 3, 4}));
  EXPECT_EQ(d.length, 0.0);
  EXPECT_EQ(d.width, 0.0);
  EXPECT_EQ(d.height, 0.0);
  EXPECT_FALSE(passes_heuristics(d, BoxLimits{}));
}

TEST(FitBox, EmptyThrows) { EXPECT_THROW(fit_box(std::vector<Vec3>{}), std::invalid_argument); }

TEST(FitBox, ContainsEveryPoint) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Vec3> pts(50);
    for (auto& p : pts) p = {u(rng) + 10, u(rng) / 2, u(rng) / 3};
    const auto d = fit_box(pts);
    for (const auto& p : pts) {
      EXPECT_LE(std::abs(p.x - d.center.x), d.length / 2 + 1e-12);
      EXPECT_LE(std::abs(p.y - d.center.y), d.width / 2 + 1e-12);
      EXPECT_LE(std::abs(p.z - d.center.z), d.height / 2 + 1e-12);
    }
    // Some point touches each face.
    double max_x = -1e9;
    for (const auto& p : pts) max_x = std::max(max_x, p.x);
    EXPECT_DOUBLE_EQ(max_x, d.center.x + d.length / 2);
  }
}

TEST(FitBox, MonotoneUnderInsertion) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<Vec3> pts = {{0, 0, 0}};
  auto prev = fit_box(pts);
  for (int i = 0; i < 100; ++i) {
    pts.push_back({u(rng), u(rng), u(rng)});
    const auto d = fit_box(pts);
    EXPECT_GE(d.length, prev.length);
    EXPECT_GE(d.width, prev.width);
    EXPECT_GE(d.height, prev.height);
    prev = d;
  }
}

Detection3D box(double l, double w, double h) {
  Detection3D d;
  d.length = l;
  d.width = w;
  d.height = h;
  return d;
}

TEST(Heuristics, Examples) {
  const BoxLimits limits;
  EXPECT_TRUE(passes_heuristics(box(4.5, 1.8, 1.5), limits));
  EXPECT_TRUE(passes_heuristics(box(1.8, 4.5, 1.5), limits));  // orientation-agnostic
  EXPECT_FALSE(passes_heuristics(box(0.3, 0.3, 1.7), limits));  // pedestrian
  EXPECT_FALSE(passes_heuristics(box(12.0, 2.5, 3.5), limits));  // bus
  EXPECT_FALSE(passes_heuristics(box(4.5, 1.8, 0.1), limits));   // flat debris
  EXPECT_TRUE(passes_heuristics(box(7.0, 2.0, 3.0), limits));    // inclusive upper bounds
  EXPECT_TRUE(passes_heuristics(box(1.0, 0.5, 0.5), limits));    // area 0.5, inclusive
  EXPECT_TRUE(passes_heuristics(box(6.0, 3.0, 2.0), limits));    // area 18 ok, ...
  EXPECT_FALSE(passes_heuristics(box(7.0, 3.0, 2.0), limits));   // ... 21 is not
}

TEST(Heuristics, LimitsValidation) {
  BoxLimits l;
  EXPECT_NO_THROW(l.validate());
  l.min_length = 8.0;
  EXPECT_THROW(l.validate(), ConfigError);
}

TEST(FrameSeed, DependsOnBothInputs) {
  EXPECT_EQ(frame_seed(1, 2), frame_seed(1, 2));
  EXPECT_NE(frame_seed(1, 2), frame_seed(1, 3));
  EXPECT_NE(frame_seed(1, 2), frame_seed(2, 2));
}

DetectorConfig dense_config() {
  DetectorConfig cfg;
  cfg.preprocess.stride = 1;
  return cfg;
}

TEST(Detect, EmptyFrame) {
  Frame frame;
  frame.ego_pose = RigidTransform({1, 0, 0, 0}, {}, kEgoFrame, kCityFrame);
  const auto result = detect(frame, SceneContext{}, DetectorConfig{});
  EXPECT_TRUE(result.detections.empty());
  EXPECT_TRUE(result.stats.ground_warning);
  EXPECT_TRUE(result.stats.drivable_skipped);
}

TEST(Detect, GroundOnlyFrameHasNoDetections) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  Frame frame;
  frame.ego_pose = RigidTransform({1, 0, 0, 0}, {}, kEgoFrame, kCityFrame);
  for (int i = 0; i < 5000; ++i) frame.cloud.points.push_back({u(rng), u(rng), -1.7});
  const auto result = detect(frame, SceneContext{}, dense_config());
  EXPECT_TRUE(result.detections.empty());
  EXPECT_FALSE(result.stats.ground_warning);
  EXPECT_EQ(result.stats.after_ground, 0u);
}

TEST(Detect, FindsSyntheticCarsNearGroundTruth) {
  SynthConfig sc;
  sc.n_cars = 3;
  sc.n_frames = 1;
  sc.ego_motion = EgoMotion::kStatic;
  const auto scene = make_scene(sc);
  const auto& seq = scene.sequence;
  const SceneContext ctx{seq.cameras, seq.drivable ? &*seq.drivable : nullptr};
  ASSERT_NE(ctx.drivable, nullptr);
  const auto result = detect(seq.frames[0], ctx, DetectorConfig{}, true);
  const auto& gt = seq.ground_truth.at(0);
  ASSERT_EQ(gt.size(), 3u);
  ASSERT_EQ(result.detections.size(), 3u);
  EXPECT_FALSE(result.stats.drivable_skipped);
  ASSERT_TRUE(result.filtered_cloud.has_value());
  for (const auto& g : gt) {
    double best = 1e9;
    for (const auto& d : result.detections) best = std::min(best, std::hypot(d.center.x - g.center.x, d.center.y - g.center.y));
    EXPECT_LT(best, 0.3) << g.track_id;
  }
  for (std::size_t i = 1; i < result.detections.size(); ++i) {
    EXPECT_LE(result.detections[i - 1].center.x, result.detections[i].center.x);
  }
}

TEST(Detect, CityFrameOutputFollowsEgoPose) {
  SynthConfig sc;
  sc.n_cars = 2;
  sc.n_frames = 1;
  sc.ego_motion = EgoMotion::kStatic;
  sc.clutter_points = 0;
  const auto scene = make_scene(sc);
  Frame frame = scene.sequence.frames[0];
  const auto a = detect(frame, SceneContext{}, DetectorConfig{});
  frame.ego_pose = RigidTransform({1, 0, 0, 0}, {100, -50, 0}, kEgoFrame, kCityFrame);
  const auto b = detect(frame, SceneContext{}, DetectorConfig{});
  ASSERT_EQ(a.detections.size(), b.detections.size());
  for (std::size_t i = 0; i < a.detections.size(); ++i) {
    EXPECT_NEAR(b.detections[i].center.x - a.detections[i].center.x, 100 - sc.ego_start_x, 1e-9);
    EXPECT_NEAR(b.detections[i].center.y - a.detections[i].center.y, -50 - sc.ego_start_y, 1e-9);
  }
}

}  // namespace
}  // namespace lidartrack
