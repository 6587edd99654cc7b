#include "lidartrack_cli/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

namespace lidartrack::cli {
namespace {

/// Completed detections waiting for the tracker, indexed by frame position.
class SequencingBuffer {
 public:
  SequencingBuffer(std::size_t frames, std::size_t window) : slots_(frames), window_(window) {}

  /// Blocks until position `pos` is inside the in-flight window. Returns
  /// false if the run was aborted.
  bool wait_for_slot(std::size_t pos) {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, [&] { return aborted_ || pos < consumed_ + window_; });
    return !aborted_;
  }

  void put(std::size_t pos, DetectionResult result) {
    {
      std::lock_guard lock(mutex_);
      slots_[pos] = std::move(result);
    }
    cv_.notify_all();
  }

  void fail(std::exception_ptr error) {
    {
      std::lock_guard lock(mutex_);
      if (!error_) {
        error_ = error;
      }
      aborted_ = true;
    }
    cv_.notify_all();
  }

  /// Blocks until position `pos` is ready; rethrows a worker failure.
  DetectionResult take(std::size_t pos) {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, [&] { return aborted_ || slots_[pos].has_value(); });
    if (aborted_ && error_) {
      std::rethrow_exception(error_);
    }
    DetectionResult r = std::move(*slots_[pos]);
    slots_[pos].reset();
    ++consumed_;
    lock.unlock();
    cv_.notify_all();
    return r;
  }

  void abort() {
    {
      std::lock_guard lock(mutex_);
      aborted_ = true;
    }
    cv_.notify_all();
  }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  std::vector<std::optional<DetectionResult>> slots_;
  std::size_t window_;
  std::size_t consumed_ = 0;
  bool aborted_ = false;
  std::exception_ptr error_;
};

}  // namespace

std::vector<TrackRecord> to_records(std::int64_t frame, const std::vector<TrackSnapshot>& snapshots) {
  std::vector<TrackRecord> out;
  out.reserve(snapshots.size());
  for (const auto& s : snapshots) {
    out.push_back({frame, s.id, s.center, s.vx, s.vy, s.length, s.width, s.height});
  }
  return out;
}

PipelineResult run_pipeline(const Sequence& seq, const PipelineConfig& cfg, int workers,
                            bool keep_detections) {
  cfg.validate();
  const SceneContext scene{seq.cameras, seq.drivable ? &*seq.drivable : nullptr};
  const std::size_t n = seq.frames.size();

  PipelineResult result;
  Tracker tracker(cfg.tracker);
  auto consume = [&](std::size_t pos, DetectionResult det) {
    const Frame& frame = seq.frames[pos];
    const auto start = std::chrono::steady_clock::now();
    const auto snapshots = tracker.step(det.detections, frame.timestamp);
    FrameReport report;
    report.index = frame.index;
    report.detection = det.stats;
    report.tracking_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    report.live_tracks = tracker.tracks().size();
    report.confirmed_tracks = snapshots.size();
    result.frames.push_back(report);
    auto records = to_records(frame.index, snapshots);
    result.records.insert(result.records.end(), records.begin(), records.end());
    if (keep_detections) {
      result.detections.push_back(std::move(det.detections));
    }
  };

  if (workers <= 1 || n <= 1) {
    for (std::size_t pos = 0; pos < n; ++pos) {
      consume(pos, detect(seq.frames[pos], scene, cfg.detector));
    }
    return result;
  }

  const auto pool_size = static_cast<std::size_t>(workers);
  SequencingBuffer buffer(n, 2 * pool_size);
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    pool.reserve(pool_size);
    for (std::size_t w = 0; w < pool_size; ++w) {
      pool.emplace_back([&] {
        for (std::size_t pos = next++; pos < n; pos = next++) {
          if (!buffer.wait_for_slot(pos)) {
            return;
          }
          try {
            buffer.put(pos, detect(seq.frames[pos], scene, cfg.detector));
          } catch (...) {
            buffer.fail(std::current_exception());
            return;
          }
        }
      });
    }
    try {
      for (std::size_t pos = 0; pos < n; ++pos) {
        consume(pos, buffer.take(pos));
      }
    } catch (...) {
      buffer.abort();
      throw;
    }
  }
  return result;
}

}  // namespace lidartrack::cli
