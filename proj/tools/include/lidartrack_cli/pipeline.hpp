#pragma once

#include <cstdint>
#include <vector>

#include "lidartrack/dataset_io.hpp"
#include "lidartrack/detection.hpp"
#include "lidartrack/tracker.hpp"
#include "lidartrack_cli/config.hpp"

namespace lidartrack::cli {

struct FrameReport {
  std::int64_t index = 0;
  DetectionStats detection;
  double tracking_ms = 0.0;
  std::size_t live_tracks = 0;
  std::size_t confirmed_tracks = 0;
};

struct PipelineResult {
  std::vector<TrackRecord> records;
  std::vector<FrameReport> frames;
  /// Per frame, city frame. Filled only when requested.
  std::vector<std::vector<Detection3D>> detections;
};

/// Detects every frame and feeds the tracker in frame order.
///
/// With workers > 1, detection runs on a bounded pool (at most 2*workers
/// frames in flight) and a sequencing buffer hands results to the tracker in
/// order. Per-frame RANSAC seeds depend only on the frame index, so the
/// records are identical for any worker count.
PipelineResult run_pipeline(const Sequence& seq, const PipelineConfig& cfg, int workers = 1,
                            bool keep_detections = false);

std::vector<TrackRecord> to_records(std::int64_t frame, const std::vector<TrackSnapshot>& snapshots);

}  // namespace lidartrack::cli
