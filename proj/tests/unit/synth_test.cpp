#include "lidartrack/synth.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <iterator>

#include "lidartrack/detection.hpp"
#include "lidartrack/errors.hpp"
#include "support/temp_dir.hpp"

namespace lidartrack {
namespace {

namespace fs = std::filesystem;

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    files[fs::relative(entry.path(), root).string()] =
        std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  return files;
}

SynthConfig small() {
  SynthConfig cfg;
  cfg.n_cars = 3;
  cfg.n_frames = 5;
  cfg.points_per_car = 500;
  cfg.ground_density = 0.5;
  return cfg;
}

TEST(Synth, ZeroCarsGiveZeroDetections) {
  SynthConfig cfg = small();
  cfg.n_cars = 0;
  const auto scene = make_scene(cfg);
  EXPECT_TRUE(scene.sequence.ground_truth.empty());
  const auto& seq = scene.sequence;
  const SceneContext ctx{seq.cameras, &*seq.drivable};
  for (const auto& frame : seq.frames) EXPECT_TRUE(detect(frame, ctx, DetectorConfig{}).detections.empty());
}

TEST(Synth, ByteIdenticalOutputForSameSeed) {
  testing_support::TempDir a;
  testing_support::TempDir b;
  SynthConfig cfg = small();
  cfg.ego_motion = EgoMotion::kStatic;
  cfg.speed_min = cfg.speed_max = 0.0;
  generate(cfg, a.path());
  generate(cfg, b.path());
  const auto ta = read_tree(a.path());
  EXPECT_GT(ta.size(), 5u);
  EXPECT_EQ(ta, read_tree(b.path()));
}

TEST(Synth, SeedChangesOutput) {
  SynthConfig cfg = small();
  const auto a = make_scene(cfg);
  cfg.rng_seed += 1;
  const auto b = make_scene(cfg);
  EXPECT_NE(a.sequence.frames[0].cloud.points, b.sequence.frames[0].cloud.points);
}

TEST(Synth, GroundTruthMovesAtCarVelocity) {
  const SynthConfig cfg = small();
  const auto scene = make_scene(cfg);
  for (const auto& car : scene.cars) {
    const double speed = std::hypot(car.vx, car.vy);
    EXPECT_GE(speed, cfg.speed_min);
    EXPECT_LE(speed, cfg.speed_max);
    for (int f = 0; f < cfg.n_frames; ++f) {
      for (const auto& box : scene.sequence.ground_truth.at(f)) {
        if (box.track_id != car.id) continue;
        EXPECT_NEAR(box.center.x, car.start.x + car.vx * cfg.dt * f, 1e-9);
        EXPECT_NEAR(box.center.y, car.start.y + car.vy * cfg.dt * f, 1e-9);
      }
    }
  }
}

TEST(Synth, CarPointsLieOnTheirBoxes) {
  SynthConfig cfg = small();
  cfg.ground_density = 0.0;
  cfg.clutter_points = 0;
  cfg.ego_heading = 0.4;
  const auto scene = make_scene(cfg);
  const double slack = 3.0 * cfg.noise_sigma * std::sqrt(3.0) + 1e-5;
  for (const auto& frame : scene.sequence.frames) {
    const auto& boxes = scene.sequence.ground_truth.at(frame.index);
    EXPECT_EQ(frame.cloud.size(), boxes.size() * static_cast<std::size_t>(cfg.points_per_car));
    for (const auto& p : frame.cloud.points) {
      const Vec3 c = frame.ego_pose.apply(p);
      bool inside = false;
      for (const auto& b : boxes) {
        // Box axes follow the heading.
        const double dx = c.x - b.center.x;
        const double dy = c.y - b.center.y;
        const double fx = dx * std::cos(cfg.ego_heading) + dy * std::sin(cfg.ego_heading);
        const double ly = -dx * std::sin(cfg.ego_heading) + dy * std::cos(cfg.ego_heading);
        inside = inside || (std::abs(fx) <= b.length / 2 + slack && std::abs(ly) <= b.width / 2 + slack &&
                            std::abs(c.z - b.center.z) <= b.height / 2 + slack);
      }
      ASSERT_TRUE(inside);
    }
  }
}

TEST(Synth, RejectsBadConfig) {
  SynthConfig cfg;
  cfg.dt = 0.0;
  EXPECT_THROW(make_scene(cfg), ConfigError);
  cfg = {};
  cfg.n_cars = -1;
  EXPECT_THROW(make_scene(cfg), ConfigError);
}

}  // namespace
}  // namespace lidartrack
