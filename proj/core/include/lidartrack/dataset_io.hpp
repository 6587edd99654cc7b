#pragma once

// On-disk sequence format. A sequence directory contains:
//
//   manifest.json      {"format": "lidartrack-sequence", "version": 1,
//                       "frames": [{"index", "timestamp", "num_points"}, ...]}
//   calibration.json   {"cameras": [{"id", "intrinsics": {fx, fy, cx, cy, width, height},
//                                    "ego_to_camera": {"rotation": [w,x,y,z],
//                                                      "translation": [x,y,z]}}]}
//   poses.json         {"poses": [{"index", "rotation": [w,x,y,z], "translation": [x,y,z]}]}
//                      ego -> city for each frame
//   frames/NNNNNN.bin  num_points * 3 little-endian float32 (x, y, z), ego frame
//   drivable.json      {"origin_xy": [x, y], "resolution", "width", "height"}   (optional)
//   drivable.bin       width*height bits, row-major, LSB first within each byte
//   masks/NNNNNN.json  {"masks": [{"camera_id", "polygon": [[u, v], ...]}]}      (optional)
//   gt.jsonl           {"frame", "track_id", "center": [x,y,z], "length", "width", "height"}
//                      one object per line, city frame                          (optional)
//
// docs/dataset_format.md describes the fields in prose.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lidartrack/geometry.hpp"

namespace lidartrack {

inline constexpr const char* kEgoFrame = "ego";
inline constexpr const char* kCityFrame = "city";

struct PointCloud {
  std::vector<Vec3> points;
  std::string frame = kEgoFrame;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

struct MaskRegion {
  std::string camera_id;
  std::vector<std::pair<double, double>> polygon;  // (u, v) vertices
};

/// Row-major occupancy grid in the city frame. Cell (col, row) covers
/// [origin_x + col*res, origin_x + (col+1)*res) x [origin_y + row*res, ...).
struct DrivableGrid {
  double origin_x = 0.0;
  double origin_y = 0.0;
  double resolution = 1.0;
  int width = 0;
  int height = 0;
  std::vector<bool> bits;

  void validate() const;
  bool drivable_at(double x, double y) const;
  bool cell(int col, int row) const {
    return bits[static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
                static_cast<std::size_t>(col)];
  }
};

struct GroundTruthBox {
  std::string track_id;
  Vec3 center;  // city frame
  double length = 0.0;
  double width = 0.0;
  double height = 0.0;
};

struct Frame {
  std::int64_t index = 0;
  double timestamp = 0.0;
  PointCloud cloud;         // ego frame
  RigidTransform ego_pose;  // ego -> city
  std::vector<MaskRegion> masks;
};

struct Sequence {
  std::vector<Frame> frames;
  std::vector<CameraModel> cameras;
  std::optional<DrivableGrid> drivable;
  /// Keyed by frame index. Empty when the sequence has no gt.jsonl.
  std::map<std::int64_t, std::vector<GroundTruthBox>> ground_truth;
  bool has_ground_truth = false;
};

/// One output record per (frame, confirmed track).
struct TrackRecord {
  std::int64_t frame = 0;
  std::int64_t track_id = 0;
  Vec3 center;
  double vx = 0.0;
  double vy = 0.0;
  double length = 0.0;
  double width = 0.0;
  double height = 0.0;

  friend bool operator==(const TrackRecord&, const TrackRecord&) = default;
};

/// Loads a sequence directory. Throws DataError naming the offending file
/// (and line/offset where applicable).
Sequence load_sequence(const std::filesystem::path& dir);

/// Writes `seq` in the directory layout above, creating `dir` if needed.
/// Point coordinates are stored as float32.
void write_sequence(const Sequence& seq, const std::filesystem::path& dir);

std::vector<CameraModel> load_calibration(const std::filesystem::path& file);

std::map<std::int64_t, std::vector<GroundTruthBox>> read_ground_truth(
    const std::filesystem::path& file);
void write_ground_truth(const std::filesystem::path& file,
                        const std::map<std::int64_t, std::vector<GroundTruthBox>>& gt);

/// Newline-delimited JSON: a header line followed by one record per line.
void write_tracks(const std::filesystem::path& file, const std::vector<TrackRecord>& records);
std::vector<TrackRecord> read_tracks(const std::filesystem::path& file);

std::vector<Vec3> read_points_bin(const std::filesystem::path& file, std::size_t expected_points);
void write_points_bin(const std::filesystem::path& file, const std::vector<Vec3>& points);

}  // namespace lidartrack
