#include "lidartrack/dataset_io.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "lidartrack/errors.hpp"
#include "lidartrack/synth.hpp"
#include "support/temp_dir.hpp"

namespace lidartrack {
namespace {

using testing_support::TempDir;

SynthConfig small_config() {
  SynthConfig cfg;
  cfg.n_cars = 2;
  cfg.n_frames = 3;
  cfg.points_per_car = 200;
  cfg.ground_density = 0.2;
  cfg.clutter_points = 20;
  return cfg;
}

void write_text(const std::filesystem::path& file, const std::string& text) {
  std::ofstream(file, std::ios::trunc) << text;
}

std::string error_message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

TEST(LoadSequence, LoadsSyntheticDirectory) {
  TempDir dir;
  generate(small_config(), dir.path());
  const Sequence seq = load_sequence(dir.path());
  ASSERT_EQ(seq.frames.size(), 3u);
  EXPECT_EQ(seq.frames[0].index, 0);
  EXPECT_EQ(seq.frames[2].index, 2);
  EXPECT_EQ(seq.cameras.size(), 1u);
  EXPECT_TRUE(seq.drivable.has_value());
  EXPECT_TRUE(seq.has_ground_truth);
  EXPECT_EQ(seq.frames[1].ego_pose.from_frame(), kEgoFrame);
  EXPECT_EQ(seq.frames[1].ego_pose.to_frame(), kCityFrame);
}

TEST(LoadSequence, EmptyDirectoryReportsMissingManifest) {
  TempDir dir;
  const auto msg = error_message([&] { load_sequence(dir.path()); });
  EXPECT_NE(msg.find("missing manifest"), std::string::npos) << msg;
}

TEST(LoadSequence, RejectsRepeatedTimestamps) {
  TempDir dir;
  generate(small_config(), dir.path());
  write_text(dir / "manifest.json",
             R"({"format":"lidartrack-sequence","version":1,"frames":[)"
             R"({"index":0,"timestamp":0.0,"num_points":0},{"index":1,"timestamp":0.0,"num_points":0}]})");
  const auto msg = error_message([&] { load_sequence(dir.path()); });
  EXPECT_NE(msg.find("non-monotone timestamps"), std::string::npos) << msg;
  EXPECT_NE(msg.find("manifest.json"), std::string::npos) << msg;
}

TEST(LoadSequence, RejectsUnknownFormatOrVersion) {
  TempDir dir;
  generate(small_config(), dir.path());
  write_text(dir / "manifest.json", R"({"format":"lidartrack-sequence","version":2,"frames":[]})");
  EXPECT_NE(error_message([&] { load_sequence(dir.path()); }).find("version"), std::string::npos);
  write_text(dir / "manifest.json", R"({"format":"kitti","version":1,"frames":[]})");
  EXPECT_NE(error_message([&] { load_sequence(dir.path()); }).find("format"), std::string::npos);
}

TEST(LoadSequence, MissingCalibrationNamesTheFile) {
  TempDir dir;
  generate(small_config(), dir.path());
  std::filesystem::remove(dir / "calibration.json");
  const auto msg = error_message([&] { load_sequence(dir.path()); });
  EXPECT_NE(msg.find("calibration.json"), std::string::npos) << msg;
}

TEST(LoadSequence, TruncatedPointFileReportsSize) {
  TempDir dir;
  generate(small_config(), dir.path());
  std::filesystem::resize_file(dir / "frames" / "000001.bin", 100);
  const auto msg = error_message([&] { load_sequence(dir.path()); });
  EXPECT_NE(msg.find("000001.bin"), std::string::npos) << msg;
  EXPECT_NE(msg.find("found 100"), std::string::npos) << msg;
}

TEST(LoadSequence, MalformedJsonReportsOffset) {
  TempDir dir;
  generate(small_config(), dir.path());
  write_text(dir / "poses.json", "{\"poses\": [");
  const auto msg = error_message([&] { load_sequence(dir.path()); });
  EXPECT_NE(msg.find("poses.json"), std::string::npos) << msg;
  EXPECT_NE(msg.find("byte"), std::string::npos) << msg;
}

TEST(LoadSequence, MaskWithUnknownCameraIsRejected) {
  TempDir dir;
  generate(small_config(), dir.path());
  std::filesystem::create_directories(dir / "masks");
  write_text(dir / "masks" / "000000.json",
             R"({"masks":[{"camera_id":"nope","polygon":[[0,0],[1,0],[1,1]]}]})");
  const auto msg = error_message([&] { load_sequence(dir.path()); });
  EXPECT_NE(msg.find("unknown camera 'nope'"), std::string::npos) << msg;
}

TEST(LoadSequence, BadGroundTruthLineIsNumbered) {
  TempDir dir;
  generate(small_config(), dir.path());
  write_text(dir / "gt.jsonl",
             "{\"frame\":0,\"track_id\":\"a\",\"center\":[0,0,0],\"length\":4,\"width\":2,\"height\":1.5}\n"
             "{\"frame\":1,\"track_id\":\"a\"}\n");
  const auto msg = error_message([&] { load_sequence(dir.path()); });
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
}

TEST(SequenceFiles, SyntheticSequenceRoundTrips) {
  TempDir dir;
  SynthConfig cfg = small_config();
  cfg.ego_heading = 0.3;
  const SynthScene scene = generate(cfg, dir.path());
  const Sequence& a = scene.sequence;
  const Sequence b = load_sequence(dir.path());

  ASSERT_EQ(a.frames.size(), b.frames.size());
  for (std::size_t i = 0; i < a.frames.size(); ++i) {
    const auto& fa = a.frames[i];
    const auto& fb = b.frames[i];
    EXPECT_EQ(fa.index, fb.index);
    EXPECT_EQ(fa.timestamp, fb.timestamp);
    EXPECT_EQ(fa.cloud.points, fb.cloud.points);  // float32-exact by construction
    EXPECT_NEAR(fa.ego_pose.rotation().z, fb.ego_pose.rotation().z, 1e-9);
    EXPECT_NEAR(fa.ego_pose.translation().x, fb.ego_pose.translation().x, 1e-9);
    ASSERT_EQ(fa.masks.size(), fb.masks.size());
    for (std::size_t m = 0; m < fa.masks.size(); ++m) {
      EXPECT_EQ(fa.masks[m].camera_id, fb.masks[m].camera_id);
      EXPECT_EQ(fa.masks[m].polygon, fb.masks[m].polygon);
    }
  }
  ASSERT_TRUE(b.drivable.has_value());
  EXPECT_EQ(a.drivable->bits, b.drivable->bits);
  EXPECT_EQ(a.drivable->width, b.drivable->width);
  EXPECT_EQ(a.drivable->origin_x, b.drivable->origin_x);
  ASSERT_EQ(a.ground_truth.size(), b.ground_truth.size());
  for (const auto& [frame, boxes] : a.ground_truth) {
    const auto& other = b.ground_truth.at(frame);
    ASSERT_EQ(boxes.size(), other.size());
    for (std::size_t k = 0; k < boxes.size(); ++k) {
      EXPECT_EQ(boxes[k].track_id, other[k].track_id);
      EXPECT_EQ(boxes[k].center, other[k].center);
      EXPECT_EQ(boxes[k].length, other[k].length);
    }
  }
  ASSERT_EQ(a.cameras.size(), b.cameras.size());
  EXPECT_EQ(a.cameras[0].fx, b.cameras[0].fx);
}

TEST(Tracks, EmptySetWritesHeaderOnly) {
  TempDir dir;
  write_tracks(dir / "t.jsonl", {});
  std::ifstream in(dir / "t.jsonl");
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 1);
  EXPECT_TRUE(read_tracks(dir / "t.jsonl").empty());
}

TEST(Tracks, OneTrackTwoFramesGivesTwoRecords) {
  TempDir dir;
  const std::vector<TrackRecord> records = {{0, 7, {1, 2, 3}, 0.5, 0.0, 4.5, 1.8, 1.5},
                                            {1, 7, {1.05, 2, 3}, 0.5, 0.0, 4.5, 1.8, 1.5}};
  write_tracks(dir / "t.jsonl", records);
  EXPECT_EQ(read_tracks(dir / "t.jsonl"), records);
}

TEST(Tracks, RandomRecordsRoundTripExactly) {
  TempDir dir;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1e4, 1e4);
  std::vector<TrackRecord> records;
  for (int i = 0; i < 300; ++i) {
    records.push_back({i / 5, static_cast<std::int64_t>(rng() % 1000), {u(rng), u(rng), u(rng)},
                       u(rng), u(rng), u(rng), u(rng), u(rng)});
  }
  write_tracks(dir / "t.jsonl", records);
  EXPECT_EQ(read_tracks(dir / "t.jsonl"), records);
}

TEST(Tracks, MissingHeaderIsRejected) {
  TempDir dir;
  write_text(dir / "t.jsonl", "{\"frame\":0}\n");
  EXPECT_THROW(read_tracks(dir / "t.jsonl"), DataError);
  EXPECT_THROW(read_tracks(dir / "absent.jsonl"), DataError);
}

TEST(Tracks, UnwritablePathThrows) {
  EXPECT_THROW(write_tracks("/nonexistent-dir/x/tracks.jsonl", {}), DataError);
}

TEST(DrivableGrid, CellLookup) {
  DrivableGrid g;
  g.origin_x = -1.0;
  g.origin_y = -1.0;
  g.resolution = 1.0;
  g.width = 2;
  g.height = 2;
  g.bits = {false, true, false, true};  // column 1 (x in [0, 1)) drivable
  EXPECT_TRUE(g.drivable_at(0.5, -0.5));
  EXPECT_TRUE(g.drivable_at(0.0, 0.5));
  EXPECT_FALSE(g.drivable_at(-0.5, 0.5));
  EXPECT_FALSE(g.drivable_at(1.0, 0.0));  // outside
  EXPECT_FALSE(g.drivable_at(0.5, -1.5));
}

}  // namespace
}  // namespace lidartrack
