#include "lidartrack_cli/config.hpp"

#include <fstream>
#include <set>

#include "lidartrack/errors.hpp"

namespace lidartrack::cli {
namespace {

using nlohmann::json;

/// Reads fields out of one JSON object and rejects whatever is left over.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) {
      throw ConfigError(where() + "expected a JSON object");
    }
  }

  template <typename T>
  void read(const char* key, T& field) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    if (it == obj_.end()) {
      return;
    }
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!it->is_boolean()) {
          throw ConfigError(where(key) + "expected a boolean");
        }
      } else if constexpr (std::is_integral_v<T>) {
        if (!it->is_number_integer()) {
          throw ConfigError(where(key) + "expected an integer");
        }
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!it->is_number()) {
          throw ConfigError(where(key) + "expected a number");
        }
      }
      field = it->get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(where(key) + e.what());
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  std::string child_path(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (const auto& [key, _] : obj_.items()) {
      if (!seen_.contains(key)) {
        throw ConfigError(where(key.c_str()) + "unknown key");
      }
    }
  }

 private:
  std::string where(const char* key = nullptr) const {
    std::string p = path_;
    if (key != nullptr) {
      p = p.empty() ? key : p + "." + key;
    }
    return p.empty() ? "config: " : "config key '" + p + "': ";
  }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

const char* motion_model_name(MotionModel m) {
  switch (m) {
    case MotionModel::kStatic:
      return "static";
    case MotionModel::kConstantVelocity:
      return "constant_velocity";
    case MotionModel::kConstantAcceleration:
      return "constant_acceleration";
  }
  return "constant_velocity";
}

MotionModel motion_model_from(const std::string& name) {
  if (name == "static") return MotionModel::kStatic;
  if (name == "constant_velocity") return MotionModel::kConstantVelocity;
  if (name == "constant_acceleration") return MotionModel::kConstantAcceleration;
  throw ConfigError("config key 'tracker.motion_model': expected static, constant_velocity or "
                    "constant_acceleration, got '" + name + "'");
}

json read_json_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw ConfigError(file.string() + ": cannot open config file");
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(file.string() + ": malformed JSON at byte " + std::to_string(e.byte));
  }
}

}  // namespace

void PipelineConfig::validate() const {
  detector.preprocess.validate();
  detector.clustering.validate();
  detector.limits.validate();
  tracker.validate();
  if (!(match_distance > 0.0)) {
    throw ConfigError("evaluation.match_distance must be > 0");
  }
}

json to_json(const PipelineConfig& cfg) {
  const auto& p = cfg.detector.preprocess;
  const auto& c = cfg.detector.clustering;
  const auto& l = cfg.detector.limits;
  const auto& t = cfg.tracker;
  return {
      {"preprocess",
       {{"stride", p.stride},
        {"ground_split_height", p.ground_split_height},
        {"ransac_iterations", p.ransac_iterations},
        {"ransac_inlier_tol", p.ransac_inlier_tol},
        {"min_plane_points", p.min_plane_points},
        {"mask_filter_enabled", p.mask_filter_enabled},
        {"mask_filter_strict", p.mask_filter_strict},
        {"drivable_filter_enabled", p.drivable_filter_enabled},
        {"rng_seed", p.rng_seed}}},
      {"clustering", {{"eps", c.eps}, {"min_points", c.min_points}}},
      {"limits",
       {{"min_length", l.min_length},
        {"max_length", l.max_length},
        {"min_width", l.min_width},
        {"max_width", l.max_width},
        {"min_height", l.min_height},
        {"max_height", l.max_height},
        {"min_area", l.min_area},
        {"max_area", l.max_area}}},
      {"tracker",
       {{"hit_confirm_threshold", t.hit_confirm_threshold},
        {"miss_delete_threshold", t.miss_delete_threshold},
        {"gate_distance", t.gate_distance},
        {"process_noise_accel", t.process_noise_accel},
        {"measurement_noise_pos", t.measurement_noise_pos},
        {"initial_velocity_std", t.initial_velocity_std},
        {"motion_model", motion_model_name(t.motion_model)}}},
      {"evaluation", {{"match_distance", cfg.match_distance}}},
  };
}

PipelineConfig pipeline_config_from_json(const json& doc) {
  PipelineConfig cfg;
  ObjectReader root(doc, "");
  if (const json* j = root.child("preprocess")) {
    auto& p = cfg.detector.preprocess;
    ObjectReader r(*j, "preprocess");
    r.read("stride", p.stride);
    r.read("ground_split_height", p.ground_split_height);
    r.read("ransac_iterations", p.ransac_iterations);
    r.read("ransac_inlier_tol", p.ransac_inlier_tol);
    r.read("min_plane_points", p.min_plane_points);
    r.read("mask_filter_enabled", p.mask_filter_enabled);
    r.read("mask_filter_strict", p.mask_filter_strict);
    r.read("drivable_filter_enabled", p.drivable_filter_enabled);
    r.read("rng_seed", p.rng_seed);
    r.finish();
  }
  if (const json* j = root.child("clustering")) {
    ObjectReader r(*j, "clustering");
    r.read("eps", cfg.detector.clustering.eps);
    r.read("min_points", cfg.detector.clustering.min_points);
    r.finish();
  }
  if (const json* j = root.child("limits")) {
    auto& l = cfg.detector.limits;
    ObjectReader r(*j, "limits");
    r.read("min_length", l.min_length);
    r.read("max_length", l.max_length);
    r.read("min_width", l.min_width);
    r.read("max_width", l.max_width);
    r.read("min_height", l.min_height);
    r.read("max_height", l.max_height);
    r.read("min_area", l.min_area);
    r.read("max_area", l.max_area);
    r.finish();
  }
  if (const json* j = root.child("tracker")) {
    auto& t = cfg.tracker;
    ObjectReader r(*j, "tracker");
    r.read("hit_confirm_threshold", t.hit_confirm_threshold);
    r.read("miss_delete_threshold", t.miss_delete_threshold);
    r.read("gate_distance", t.gate_distance);
    r.read("process_noise_accel", t.process_noise_accel);
    r.read("measurement_noise_pos", t.measurement_noise_pos);
    r.read("initial_velocity_std", t.initial_velocity_std);
    std::string model = motion_model_name(t.motion_model);
    r.read("motion_model", model);
    t.motion_model = motion_model_from(model);
    r.finish();
  }
  if (const json* j = root.child("evaluation")) {
    ObjectReader r(*j, "evaluation");
    r.read("match_distance", cfg.match_distance);
    r.finish();
  }
  root.finish();
  cfg.validate();
  return cfg;
}

PipelineConfig load_pipeline_config(const std::optional<std::filesystem::path>& file) {
  if (!file) {
    return {};
  }
  return pipeline_config_from_json(read_json_file(*file));
}

json to_json(const SynthConfig& c) {
  return {{"n_cars", c.n_cars},
          {"n_frames", c.n_frames},
          {"dt", c.dt},
          {"car_length", c.car_length},
          {"car_width", c.car_width},
          {"car_height", c.car_height},
          {"speed_min", c.speed_min},
          {"speed_max", c.speed_max},
          {"ego_motion", c.ego_motion == EgoMotion::kStatic ? "static" : "straight"},
          {"ego_speed", c.ego_speed},
          {"ego_heading", c.ego_heading},
          {"ego_start_x", c.ego_start_x},
          {"ego_start_y", c.ego_start_y},
          {"points_per_car", c.points_per_car},
          {"ground_density", c.ground_density},
          {"sensor_range", c.sensor_range},
          {"clutter_points", c.clutter_points},
          {"noise_sigma", c.noise_sigma},
          {"lane_spacing", c.lane_spacing},
          {"ground_z", c.ground_z},
          {"drivable_resolution", c.drivable_resolution},
          {"write_masks", c.write_masks},
          {"rng_seed", c.rng_seed}};
}

SynthConfig synth_config_from_json(const json& doc) {
  SynthConfig c;
  ObjectReader r(doc, "");
  r.read("n_cars", c.n_cars);
  r.read("n_frames", c.n_frames);
  r.read("dt", c.dt);
  r.read("car_length", c.car_length);
  r.read("car_width", c.car_width);
  r.read("car_height", c.car_height);
  r.read("speed_min", c.speed_min);
  r.read("speed_max", c.speed_max);
  std::string ego = c.ego_motion == EgoMotion::kStatic ? "static" : "straight";
  r.read("ego_motion", ego);
  if (ego == "static") {
    c.ego_motion = EgoMotion::kStatic;
  } else if (ego == "straight") {
    c.ego_motion = EgoMotion::kStraight;
  } else {
    throw ConfigError("config key 'ego_motion': expected static or straight, got '" + ego + "'");
  }
  r.read("ego_speed", c.ego_speed);
  r.read("ego_heading", c.ego_heading);
  r.read("ego_start_x", c.ego_start_x);
  r.read("ego_start_y", c.ego_start_y);
  r.read("points_per_car", c.points_per_car);
  r.read("ground_density", c.ground_density);
  r.read("sensor_range", c.sensor_range);
  r.read("clutter_points", c.clutter_points);
  r.read("noise_sigma", c.noise_sigma);
  r.read("lane_spacing", c.lane_spacing);
  r.read("ground_z", c.ground_z);
  r.read("drivable_resolution", c.drivable_resolution);
  r.read("write_masks", c.write_masks);
  r.read("rng_seed", c.rng_seed);
  r.finish();
  c.validate();
  return c;
}

SynthConfig load_synth_config(const std::optional<std::filesystem::path>& file) {
  if (!file) {
    return {};
  }
  return synth_config_from_json(read_json_file(*file));
}

}  // namespace lidartrack::cli
