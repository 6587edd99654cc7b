#include <iostream>

#include "CLI11.hpp"
#include "lidartrack_cli/commands.hpp"
#include "lidartrack_cli/config.hpp"

using namespace lidartrack::cli;

int main(int argc, char** argv) {
  CLI::App app{"LiDAR multi-object tracking: detection, tracking, evaluation, synthetic scenes"};
  app.require_subcommand(0, 1);
  bool print_config = false;
  app.add_flag("--print-config", print_config, "Print the default pipeline config as JSON");

  TrackOptions track;
  auto* track_cmd = app.add_subcommand("track", "Detect and track objects in a sequence");
  track_cmd->add_option("dataset", track.dataset, "Sequence directory")->required();
  track_cmd->add_option("--config", track.config, "Pipeline config JSON");
  track_cmd->add_option("-o,--output", track.output, "Tracks file (NDJSON)")->capture_default_str();
  track_cmd->add_option("--workers", track.workers, "Detection worker threads")->capture_default_str();
  track_cmd->add_option("--seed", track.seed, "Override preprocess.rng_seed");

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score a tracks file against ground truth (MOTA)");
  eval_cmd->add_option("gt", eval.ground_truth, "gt.jsonl or a sequence directory")->required();
  eval_cmd->add_option("tracks", eval.tracks, "Tracks file")->required();
  eval_cmd->add_option("--config", eval.config, "Pipeline config JSON (evaluation.match_distance)");
  eval_cmd->add_option("-o,--output", eval.output, "Write the JSON report here too");
  eval_cmd->add_option("--csv", eval.csv, "Per-frame counts as CSV");

  SynthOptions synth;
  bool synth_print_config = false;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic sequence with ground truth");
  synth_cmd->add_option("out", synth.output, "Output sequence directory");
  synth_cmd->add_option("--config", synth.config, "Synthetic scene config JSON");
  synth_cmd->add_option("--seed", synth.seed, "Override rng_seed");
  synth_cmd->add_flag("--print-config", synth_print_config, "Print the default scene config");

  PlotOptions plot;
  auto* plot_cmd = app.add_subcommand("plot", "Render one bird's-eye-view SVG per frame");
  plot_cmd->add_option("dataset", plot.dataset, "Sequence directory")->required();
  plot_cmd->add_option("tracks", plot.tracks, "Tracks file")->required();
  plot_cmd->add_option("out", plot.output, "Output directory")->required();
  plot_cmd->add_option("--config", plot.config, "Pipeline config JSON");
  plot_cmd->add_option("--extent", plot.view_half_extent, "View half-width in meters")
      ->capture_default_str();

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Per-stage timings and KD-tree vs linear-scan DBSCAN");
  bench_cmd->add_option("dataset", bench.dataset, "Sequence directory")->required();
  bench_cmd->add_option("--config", bench.config, "Pipeline config JSON");
  bench_cmd->add_option("-o,--output", bench.output, "Write a JSON report");
  bench_cmd->add_option("--uniform-points", bench.uniform_points,
                        "Also compare on N uniform random points");
  bench_cmd->add_option("--seed", bench.seed, "Override preprocess.rng_seed and the uniform-point seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (print_config) {
    std::cout << to_json(PipelineConfig{}).dump(2) << '\n';
    return kExitOk;
  }
  if (*track_cmd) return cmd_track(track, std::cout, std::cerr);
  if (*eval_cmd) return cmd_eval(eval, std::cout, std::cerr);
  if (*synth_cmd) {
    if (synth_print_config) {
      std::cout << to_json(lidartrack::SynthConfig{}).dump(2) << '\n';
      return kExitOk;
    }
    if (synth.output.empty()) {
      std::cerr << "error: synth requires an output directory\n";
      return kExitUsage;
    }
    return cmd_synth(synth, std::cout, std::cerr);
  }
  if (*plot_cmd) return cmd_plot(plot, std::cout, std::cerr);
  if (*bench_cmd) return cmd_bench(bench, std::cout, std::cerr);
  std::cerr << app.help();
  return kExitUsage;
}
