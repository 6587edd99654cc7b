#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lidartrack/dataset_io.hpp"

namespace lidartrack {

/// An object's BEV position with an identity, used for both ground truth and
/// tracker hypotheses.
struct ObjectState {
  std::string id;
  double x = 0.0;
  double y = 0.0;
};

/// CLEAR-MOT correspondence carried across frames: ground-truth id -> the
/// hypothesis id it was last matched to.
using Correspondence = std::map<std::string, std::string>;

struct FrameMatch {
  std::vector<std::pair<std::size_t, std::size_t>> matches;  // (gt index, hyp index)
  std::size_t false_negatives = 0;
  std::size_t false_positives = 0;
  std::size_t id_switches = 0;
};

/// Matches one frame. Pairs from `correspondence` that are still within
/// `match_distance` are kept first; the rest are assigned by minimum total
/// BEV distance under the same gate. A ground truth matched to a hypothesis
/// other than its last one counts as an ID switch. Updates `correspondence`.
FrameMatch match_frame(std::span<const ObjectState> gt, std::span<const ObjectState> hyp,
                       double match_distance, Correspondence& correspondence);

struct FrameCounts {
  std::int64_t frame = 0;
  std::size_t gt = 0;
  std::size_t hyp = 0;
  std::size_t matches = 0;
  std::size_t false_negatives = 0;
  std::size_t false_positives = 0;
  std::size_t id_switches = 0;
};

struct MotaResult {
  std::size_t false_negatives = 0;
  std::size_t false_positives = 0;
  std::size_t id_switches = 0;
  std::size_t gt_count = 0;
  double mota = 1.0;
  std::vector<FrameCounts> per_frame;
};

/// Raised when there is no ground truth but the tracker reported objects.
class UndefinedScoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using FrameObjects = std::map<std::int64_t, std::vector<ObjectState>>;

/// Folds match_frame over the union of frame indices in ascending order.
/// mota = 1 - (FN + FP + IDSW) / GT; 1.0 when GT and FP are both zero.
MotaResult mota(const FrameObjects& gt, const FrameObjects& hyp, double match_distance);

FrameObjects objects_from_ground_truth(
    const std::map<std::int64_t, std::vector<GroundTruthBox>>& gt);
FrameObjects objects_from_tracks(std::span<const TrackRecord> tracks);

}  // namespace lidartrack
