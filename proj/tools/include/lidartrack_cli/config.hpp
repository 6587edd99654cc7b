#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "lidartrack/detection.hpp"
#include "lidartrack/synth.hpp"
#include "lidartrack/tracker.hpp"

namespace lidartrack::cli {

struct PipelineConfig {
  DetectorConfig detector;
  TrackerConfig tracker;
  double match_distance = 2.0;

  void validate() const;
};

/// Full dump, every key present.
nlohmann::json to_json(const PipelineConfig& cfg);

/// Missing keys keep their defaults; unknown keys and wrong types throw
/// ConfigError naming the offending key path.
PipelineConfig pipeline_config_from_json(const nlohmann::json& doc);

/// Defaults when `file` is empty. Throws ConfigError on unreadable or
/// malformed files.
PipelineConfig load_pipeline_config(const std::optional<std::filesystem::path>& file);

nlohmann::json to_json(const SynthConfig& cfg);
SynthConfig synth_config_from_json(const nlohmann::json& doc);
SynthConfig load_synth_config(const std::optional<std::filesystem::path>& file);

}  // namespace lidartrack::cli
