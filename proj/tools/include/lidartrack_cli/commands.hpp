#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lidartrack/dbscan.hpp"
#include "lidartrack/geometry.hpp"

namespace lidartrack::cli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;  // usage or configuration error
inline constexpr int kExitData = 2;   // unreadable, malformed or inconsistent data

struct TrackOptions {
  std::filesystem::path dataset;
  std::optional<std::filesystem::path> config;
  std::filesystem::path output = "tracks.jsonl";
  int workers = 1;
  std::optional<std::uint64_t> seed;
};

struct EvalOptions {
  std::filesystem::path ground_truth;  // gt.jsonl or a sequence directory
  std::filesystem::path tracks;
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> output;  // JSON report
  std::optional<std::filesystem::path> csv;     // per-frame counts
};

struct SynthOptions {
  std::optional<std::filesystem::path> config;
  std::filesystem::path output;
  std::optional<std::uint64_t> seed;
};

struct PlotOptions {
  std::filesystem::path dataset;
  std::filesystem::path tracks;
  std::filesystem::path output;
  std::optional<std::filesystem::path> config;
  double view_half_extent = 50.0;  // meters around the ego
};

struct BenchOptions {
  std::filesystem::path dataset;
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> output;  // JSON report
  std::size_t uniform_points = 0;               // extra KD-vs-scan run on N uniform points
  std::optional<std::uint64_t> seed;
};

int cmd_track(const TrackOptions& opts, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err);
int cmd_synth(const SynthOptions& opts, std::ostream& out, std::ostream& err);
int cmd_plot(const PlotOptions& opts, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err);

struct DbscanComparison {
  std::size_t points = 0;
  double indexed_ms = 0.0;  // tree build + clustering
  double linear_ms = 0.0;
  bool identical = true;    // same labels from both routes

  double speedup() const { return indexed_ms > 0.0 ? linear_ms / indexed_ms : 0.0; }
};

/// Times DBSCAN through a KD-tree against DBSCAN through linear scans.
DbscanComparison compare_dbscan(std::span<const Vec3> points, const ClusteringParams& params);

/// N points uniform in a [0, 60] x [0, 60] x [0, 3] box.
std::vector<Vec3> uniform_points(std::size_t n, std::uint64_t seed);

}  // namespace lidartrack::cli
