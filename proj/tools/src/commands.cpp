#include "lidartrack_cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>

#include "json.hpp"
#include "lidartrack/errors.hpp"
#include "lidartrack/evaluation.hpp"
#include "lidartrack/kd_tree.hpp"
#include "lidartrack/synth.hpp"
#include "lidartrack_cli/config.hpp"
#include "lidartrack_cli/pipeline.hpp"
#include "lidartrack_cli/plot.hpp"

namespace lidartrack::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const UndefinedScoreError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

PipelineConfig config_with_seed(const std::optional<fs::path>& file,
                                const std::optional<std::uint64_t>& seed) {
  PipelineConfig cfg = load_pipeline_config(file);
  if (seed) {
    cfg.detector.preprocess.rng_seed = *seed;
  }
  return cfg;
}

double median(std::vector<double> v) {
  if (v.empty()) {
    return 0.0;
  }
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double ms_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t).count();
}

}  // namespace

int cmd_track(const TrackOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.workers < 1) {
      throw ConfigError("--workers must be >= 1");
    }
    const PipelineConfig cfg = config_with_seed(opts.config, opts.seed);
    const Sequence seq = load_sequence(opts.dataset);
    const auto start = std::chrono::steady_clock::now();
    const PipelineResult result = run_pipeline(seq, cfg, opts.workers);
    const double wall_ms = ms_since(start);
    write_tracks(opts.output, result.records);

    DetectionStats total;
    StageTimings& tt = total.timings;
    double tracking_ms = 0.0;
    std::size_t live = 0;
    std::size_t ground_warnings = 0;
    for (const auto& f : result.frames) {
      const auto& s = f.detection;
      total.points_in += s.points_in;
      total.after_downsample += s.after_downsample;
      total.after_ground += s.after_ground;
      total.after_drivable += s.after_drivable;
      total.after_masks += s.after_masks;
      total.clusters += s.clusters;
      total.detections += s.detections;
      tt.downsample_ms += s.timings.downsample_ms;
      tt.ground_ms += s.timings.ground_ms;
      tt.drivable_ms += s.timings.drivable_ms;
      tt.masks_ms += s.timings.masks_ms;
      tt.index_ms += s.timings.index_ms;
      tt.cluster_ms += s.timings.cluster_ms;
      tt.boxes_ms += s.timings.boxes_ms;
      tracking_ms += f.tracking_ms;
      live += f.live_tracks;
      ground_warnings += s.ground_warning ? 1 : 0;
    }
    std::set<std::int64_t> ids;
    for (const auto& r : result.records) {
      ids.insert(r.track_id);
    }

    out << "frames: " << result.frames.size() << "  workers: " << opts.workers
        << "  wall: " << std::fixed << std::setprecision(1) << wall_ms << " ms\n";
    out << std::left << std::setw(12) << "stage" << std::right << std::setw(12) << "in"
        << std::setw(12) << "out" << std::setw(12) << "total_ms" << '\n';
    auto row = [&](const char* name, std::size_t in, std::size_t outn, double ms) {
      out << std::left << std::setw(12) << name << std::right << std::setw(12) << in
          << std::setw(12) << outn << std::setw(12) << std::setprecision(2) << ms << '\n';
    };
    row("downsample", total.points_in, total.after_downsample, tt.downsample_ms);
    row("ground", total.after_downsample, total.after_ground, tt.ground_ms);
    row("drivable", total.after_ground, total.after_drivable, tt.drivable_ms);
    row("masks", total.after_drivable, total.after_masks, tt.masks_ms);
    row("clustering", total.after_masks, total.clusters, tt.index_ms + tt.cluster_ms);
    row("boxes", total.clusters, total.detections, tt.boxes_ms);
    row("tracking", total.detections, result.records.size(), tracking_ms);
    out << "confirmed track ids: " << ids.size() << "  records: " << result.records.size()
        << "  mean live tracks: "
        << (result.frames.empty() ? 0.0 : static_cast<double>(live) / result.frames.size())
        << '\n';
    if (ground_warnings > 0) {
      out << "warning: ground plane not found in " << ground_warnings << " frame(s)\n";
    }
    if (!result.frames.empty() && result.frames.front().detection.drivable_skipped) {
      out << "warning: sequence has no drivable grid; drivable filter skipped\n";
    }
    out << "tracks written to " << opts.output.string() << '\n';
    return kExitOk;
  });
}

int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const PipelineConfig cfg = load_pipeline_config(opts.config);
    const fs::path gt_file =
        fs::is_directory(opts.ground_truth) ? opts.ground_truth / "gt.jsonl" : opts.ground_truth;
    if (!fs::exists(gt_file)) {
      throw DataError(gt_file.string() + ": missing ground truth file");
    }
    const auto gt = objects_from_ground_truth(read_ground_truth(gt_file));
    const auto records = read_tracks(opts.tracks);
    const MotaResult r = mota(gt, objects_from_tracks(records), cfg.match_distance);

    const json report = {{"false_negatives", r.false_negatives},
                         {"false_positives", r.false_positives},
                         {"id_switches", r.id_switches},
                         {"gt_count", r.gt_count},
                         {"mota", r.mota},
                         {"match_distance", cfg.match_distance}};
    out << report.dump(2) << '\n';
    if (opts.output) {
      std::ofstream f(*opts.output, std::ios::trunc);
      if (!f) {
        throw DataError(opts.output->string() + ": cannot open for writing");
      }
      f << report.dump(2) << '\n';
    }
    if (opts.csv) {
      std::ofstream f(*opts.csv, std::ios::trunc);
      if (!f) {
        throw DataError(opts.csv->string() + ": cannot open for writing");
      }
      f << "frame,gt,hyp,matches,false_negatives,false_positives,id_switches\n";
      for (const auto& c : r.per_frame) {
        f << c.frame << ',' << c.gt << ',' << c.hyp << ',' << c.matches << ','
          << c.false_negatives << ',' << c.false_positives << ',' << c.id_switches << '\n';
      }
    }
    return kExitOk;
  });
}

int cmd_synth(const SynthOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    SynthConfig cfg = load_synth_config(opts.config);
    if (opts.seed) {
      cfg.rng_seed = *opts.seed;
    }
    const SynthScene scene = generate(cfg, opts.output);
    std::size_t points = 0;
    for (const auto& f : scene.sequence.frames) {
      points += f.cloud.size();
    }
    out << "wrote " << scene.sequence.frames.size() << " frames, " << scene.cars.size()
        << " cars, " << points << " points to " << opts.output.string() << '\n';
    return kExitOk;
  });
}

int cmd_plot(const PlotOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const PipelineConfig cfg = load_pipeline_config(opts.config);
    const Sequence seq = load_sequence(opts.dataset);
    std::map<std::int64_t, std::vector<TrackRecord>> tracks;
    for (auto& r : read_tracks(opts.tracks)) {
      tracks[r.frame].push_back(r);
    }
    std::error_code ec;
    fs::create_directories(opts.output, ec);
    if (ec) {
      throw DataError(opts.output.string() + ": cannot create directory: " + ec.message());
    }
    const SceneContext scene{seq.cameras, seq.drivable ? &*seq.drivable : nullptr};
    static const std::vector<TrackRecord> kNoTracks;
    for (const auto& frame : seq.frames) {
      const DetectionResult det = detect(frame, scene, cfg.detector, true);
      BevView view;
      view.center_x = frame.ego_pose.translation().x;
      view.center_y = frame.ego_pose.translation().y;
      view.half_extent = opts.view_half_extent;
      const auto it = tracks.find(frame.index);
      const std::string svg =
          render_bev_svg(view, frame, det.filtered_cloud->points, det.detections,
                         it == tracks.end() ? kNoTracks : it->second, scene.drivable);
      std::ostringstream name;
      name << "frame_" << std::setw(6) << std::setfill('0') << frame.index << ".svg";
      const fs::path file = opts.output / name.str();
      std::ofstream f(file, std::ios::trunc);
      if (!f) {
        throw DataError(file.string() + ": cannot open for writing");
      }
      f << svg;
    }
    out << "wrote " << seq.frames.size() << " SVG file(s) to " << opts.output.string() << '\n';
    return kExitOk;
  });
}

std::vector<Vec3> uniform_points(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> xy(0.0, 60.0);
  std::uniform_real_distribution<double> z(0.0, 3.0);
  std::vector<Vec3> pts(n);
  for (auto& p : pts) {
    p.x = xy(rng);
    p.y = xy(rng);
    p.z = z(rng);
  }
  return pts;
}

DbscanComparison compare_dbscan(std::span<const Vec3> points, const ClusteringParams& params) {
  DbscanComparison c;
  c.points = points.size();
  auto start = std::chrono::steady_clock::now();
  const KdTree tree(points);
  const ClusterLabels indexed = dbscan(points, params, tree);
  c.indexed_ms = ms_since(start);
  start = std::chrono::steady_clock::now();
  const ClusterLabels linear = dbscan_linear_scan(points, params);
  c.linear_ms = ms_since(start);
  c.identical = indexed.labels == linear.labels;
  return c;
}

int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const PipelineConfig cfg = config_with_seed(opts.config, opts.seed);
    const Sequence seq = load_sequence(opts.dataset);
    const SceneContext scene{seq.cameras, seq.drivable ? &*seq.drivable : nullptr};

    std::map<std::string, std::vector<double>> stage_ms;
    const std::vector<std::string> stages = {"downsample", "ground", "drivable", "masks",
                                             "kdtree_build", "dbscan", "boxes", "tracking",
                                             "total"};
    std::vector<double> cmp_indexed, cmp_linear, cmp_points;
    bool identical = true;
    Tracker tracker(cfg.tracker);
    for (const auto& frame : seq.frames) {
      const DetectionResult det = detect(frame, scene, cfg.detector, true);
      const auto t0 = std::chrono::steady_clock::now();
      tracker.step(det.detections, frame.timestamp);
      const double track_ms = ms_since(t0);
      const auto& t = det.stats.timings;
      const double values[] = {t.downsample_ms, t.ground_ms,  t.drivable_ms,
                               t.masks_ms,      t.index_ms,   t.cluster_ms,
                               t.boxes_ms,      track_ms,
                               t.downsample_ms + t.ground_ms + t.drivable_ms + t.masks_ms +
                                   t.index_ms + t.cluster_ms + t.boxes_ms + track_ms};
      for (std::size_t i = 0; i < stages.size(); ++i) {
        stage_ms[stages[i]].push_back(values[i]);
      }
      const DbscanComparison c = compare_dbscan(det.filtered_cloud->points, cfg.detector.clustering);
      cmp_indexed.push_back(c.indexed_ms);
      cmp_linear.push_back(c.linear_ms);
      cmp_points.push_back(static_cast<double>(c.points));
      identical = identical && c.identical;
    }

    json report;
    report["frames"] = seq.frames.size();
    report["stages"] = json::array();
    out << "frames: " << seq.frames.size() << '\n';
    out << std::left << std::setw(14) << "stage" << std::right << std::setw(14) << "median_ms"
        << '\n';
    out << std::fixed << std::setprecision(3);
    for (const auto& s : stages) {
      const double m = median(stage_ms[s]);
      out << std::left << std::setw(14) << s << std::right << std::setw(14) << m << '\n';
      report["stages"].push_back({{"stage", s}, {"median_ms", m}});
    }

    auto comparison_row = [&](const char* label, double pts, double idx, double lin, bool same) {
      const double speedup = idx > 0.0 ? lin / idx : 0.0;
      out << std::left << std::setw(14) << label << std::right << std::setw(10)
          << static_cast<std::size_t>(pts) << std::setw(14) << idx << std::setw(14) << lin
          << std::setw(10) << std::setprecision(2) << speedup << std::setw(11)
          << (same ? "yes" : "NO") << std::setprecision(3) << '\n';
      return json{{"input", label},      {"points", static_cast<std::size_t>(pts)},
                  {"indexed_ms", idx},   {"linear_ms", lin},
                  {"speedup", speedup},  {"identical", same}};
    };
    out << "\nDBSCAN: KD-tree vs linear scan\n";
    out << std::left << std::setw(14) << "input" << std::right << std::setw(10) << "points"
        << std::setw(14) << "kdtree_ms" << std::setw(14) << "linear_ms" << std::setw(10)
        << "speedup" << std::setw(11) << "identical" << '\n';
    report["dbscan_comparison"] = json::array();
    report["dbscan_comparison"].push_back(comparison_row(
        "frame_median", median(cmp_points), median(cmp_indexed), median(cmp_linear), identical));
    if (opts.uniform_points > 0) {
      const auto pts = uniform_points(opts.uniform_points, opts.seed.value_or(0));
      const DbscanComparison c = compare_dbscan(pts, cfg.detector.clustering);
      report["dbscan_comparison"].push_back(comparison_row(
          "uniform", static_cast<double>(c.points), c.indexed_ms, c.linear_ms, c.identical));
    }
    if (opts.output) {
      std::ofstream f(*opts.output, std::ios::trunc);
      if (!f) {
        throw DataError(opts.output->string() + ": cannot open for writing");
      }
      f << report.dump(2) << '\n';
    }
    return kExitOk;
  });
}

}  // namespace lidartrack::cli
