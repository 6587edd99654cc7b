#include "lidartrack/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lidartrack/hungarian.hpp"

namespace lidartrack {
namespace {

double bev_distance(const ObjectState& a, const ObjectState& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace

FrameMatch match_frame(std::span<const ObjectState> gt, std::span<const ObjectState> hyp,
                       double match_distance, Correspondence& correspondence) {
  if (!(match_distance > 0.0)) {
    throw std::invalid_argument("match_distance must be positive");
  }
  FrameMatch result;
  std::vector<bool> gt_done(gt.size(), false);
  std::vector<bool> hyp_done(hyp.size(), false);

  std::map<std::string, std::size_t> hyp_index;
  for (std::size_t j = 0; j < hyp.size(); ++j) {
    hyp_index.emplace(hyp[j].id, j);
  }

  // Continuity: keep last frame's pairs that are still within the gate.
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const auto prior = correspondence.find(gt[i].id);
    if (prior == correspondence.end()) {
      continue;
    }
    const auto h = hyp_index.find(prior->second);
    if (h == hyp_index.end() || hyp_done[h->second]) {
      continue;
    }
    if (bev_distance(gt[i], hyp[h->second]) <= match_distance) {
      gt_done[i] = true;
      hyp_done[h->second] = true;
      result.matches.emplace_back(i, h->second);
    }
  }

  std::vector<std::size_t> gt_open;
  std::vector<std::size_t> hyp_open;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (!gt_done[i]) {
      gt_open.push_back(i);
    }
  }
  for (std::size_t j = 0; j < hyp.size(); ++j) {
    if (!hyp_done[j]) {
      hyp_open.push_back(j);
    }
  }
  Eigen::MatrixXd cost(static_cast<Eigen::Index>(gt_open.size()),
                       static_cast<Eigen::Index>(hyp_open.size()));
  for (std::size_t a = 0; a < gt_open.size(); ++a) {
    for (std::size_t b = 0; b < hyp_open.size(); ++b) {
      const double d = bev_distance(gt[gt_open[a]], hyp[hyp_open[b]]);
      cost(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          d <= match_distance ? d : kForbiddenCost;
    }
  }
  const Assignment assignment = hungarian(cost);
  for (const auto& [a, b] : assignment.matches) {
    const std::size_t i = gt_open[a];
    const std::size_t j = hyp_open[b];
    const auto prior = correspondence.find(gt[i].id);
    if (prior != correspondence.end() && prior->second != hyp[j].id) {
      ++result.id_switches;
    }
    result.matches.emplace_back(i, j);
  }

  for (const auto& [i, j] : result.matches) {
    correspondence[gt[i].id] = hyp[j].id;
  }
  std::sort(result.matches.begin(), result.matches.end());
  result.false_negatives = gt.size() - result.matches.size();
  result.false_positives = hyp.size() - result.matches.size();
  return result;
}

MotaResult mota(const FrameObjects& gt, const FrameObjects& hyp, double match_distance) {
  std::set<std::int64_t> frames;
  for (const auto& [f, _] : gt) {
    frames.insert(f);
  }
  for (const auto& [f, _] : hyp) {
    frames.insert(f);
  }

  static const std::vector<ObjectState> kNone;
  MotaResult result;
  Correspondence correspondence;
  for (const std::int64_t f : frames) {
    const auto g = gt.find(f);
    const auto h = hyp.find(f);
    const auto& gt_objs = g == gt.end() ? kNone : g->second;
    const auto& hyp_objs = h == hyp.end() ? kNone : h->second;
    const FrameMatch m = match_frame(gt_objs, hyp_objs, match_distance, correspondence);
    result.false_negatives += m.false_negatives;
    result.false_positives += m.false_positives;
    result.id_switches += m.id_switches;
    result.gt_count += gt_objs.size();
    result.per_frame.push_back({f, gt_objs.size(), hyp_objs.size(), m.matches.size(),
                                m.false_negatives, m.false_positives, m.id_switches});
  }

  if (result.gt_count == 0) {
    if (result.false_positives > 0) {
      throw UndefinedScoreError("MOTA undefined: no ground truth objects but " +
                                std::to_string(result.false_positives) + " false positives");
    }
    result.mota = 1.0;
    return result;
  }
  const auto errors =
      static_cast<double>(result.false_negatives + result.false_positives + result.id_switches);
  result.mota = 1.0 - errors / static_cast<double>(result.gt_count);
  return result;
}

FrameObjects objects_from_ground_truth(
    const std::map<std::int64_t, std::vector<GroundTruthBox>>& gt) {
  FrameObjects out;
  for (const auto& [frame, boxes] : gt) {
    auto& objs = out[frame];
    for (const auto& b : boxes) {
      objs.push_back({b.track_id, b.center.x, b.center.y});
    }
  }
  return out;
}

FrameObjects objects_from_tracks(std::span<const TrackRecord> tracks) {
  FrameObjects out;
  for (const auto& r : tracks) {
    out[r.frame].push_back({std::to_string(r.track_id), r.center.x, r.center.y});
  }
  return out;
}

}  // namespace lidartrack
