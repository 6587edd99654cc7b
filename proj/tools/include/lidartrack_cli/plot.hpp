#pragma once

#include <string>
#include <vector>

#include "lidartrack/dataset_io.hpp"
#include "lidartrack/detection.hpp"

namespace lidartrack::cli {

struct BevView {
  double center_x = 0.0;
  double center_y = 0.0;
  double half_extent = 50.0;  // meters
  int pixels = 800;
};

/// Bird's-eye-view SVG of one frame in the city frame: filtered points,
/// detection boxes, confirmed tracks labelled with their ids, the drivable
/// area outline and metric axes. Output depends only on the inputs.
std::string render_bev_svg(const BevView& view, const Frame& frame,
                           const std::vector<Vec3>& ego_points,
                           const std::vector<Detection3D>& detections,
                           const std::vector<TrackRecord>& tracks, const DrivableGrid* drivable);

}  // namespace lidartrack::cli
