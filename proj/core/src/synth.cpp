#include "lidartrack/synth.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "lidartrack/errors.hpp"

namespace lidartrack {
namespace {

// Kept out of line: GCC 11's SLP vectorizer at -O3 folds the vectorized
// double -> float -> double round trip away.
[[gnu::noinline]] double to_float_precision(double v) {
  return static_cast<double>(static_cast<float>(v));
}

Vec3 to_float_precision(const Vec3& p) {
  return {to_float_precision(p.x), to_float_precision(p.y), to_float_precision(p.z)};
}

CameraModel front_camera() {
  // Optical axis along ego +x, image right along ego -y, image down along ego -z.
  Eigen::Matrix3d r;
  r << 0, -1, 0,  //
      0, 0, -1,   //
      1, 0, 0;
  const Eigen::Quaterniond q(r);
  CameraModel cam;
  cam.id = "ring_front_center";
  cam.fx = 1000.0;
  cam.fy = 1000.0;
  cam.cx = 960.0;
  cam.cy = 600.0;
  cam.width = 1920;
  cam.height = 1200;
  cam.ego_to_camera = RigidTransform({q.w(), q.x(), q.y(), q.z()}, {}, kEgoFrame, cam.id);
  return cam;
}

class NoiseSource {
 public:
  NoiseSource(std::mt19937_64& rng, double sigma) : rng_(rng), sigma_(sigma) {}

  /// Gaussian clamped to +-3 sigma.
  double operator()() {
    if (sigma_ <= 0.0) {
      return 0.0;
    }
    const double n = dist_(rng_) * sigma_;
    return std::clamp(n, -3.0 * sigma_, 3.0 * sigma_);
  }

 private:
  std::mt19937_64& rng_;
  double sigma_;
  std::normal_distribution<double> dist_{0.0, 1.0};
};

}  // namespace

void SynthConfig::validate() const {
  if (n_cars < 0 || n_frames < 0 || points_per_car < 0 || clutter_points < 0) {
    throw ConfigError("synth: counts must be non-negative");
  }
  if (!(dt > 0.0)) {
    throw ConfigError("synth: dt must be > 0");
  }
  if (!(car_length > 0.0 && car_width > 0.0 && car_height > 0.0)) {
    throw ConfigError("synth: car dimensions must be > 0");
  }
  if (!(speed_min >= 0.0 && speed_max >= speed_min)) {
    throw ConfigError("synth: require 0 <= speed_min <= speed_max");
  }
  if (!(ground_density >= 0.0) || !(sensor_range > 0.0) || !(noise_sigma >= 0.0) ||
      !(lane_spacing > 0.0) || !(drivable_resolution > 0.0)) {
    throw ConfigError("synth: densities, ranges and spacings must be positive");
  }
}

SynthScene make_scene(const SynthConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.rng_seed);
  NoiseSource noise(rng, cfg.noise_sigma);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const double heading_c = std::cos(cfg.ego_heading);
  const double heading_s = std::sin(cfg.ego_heading);
  // Road coordinates (s along the heading, l to the left) -> city xy.
  auto road_to_city = [&](double s, double l) {
    return std::pair{cfg.ego_start_x + s * heading_c - l * heading_s,
                     cfg.ego_start_y + s * heading_s + l * heading_c};
  };
  const double ego_speed = cfg.ego_motion == EgoMotion::kStraight ? cfg.ego_speed : 0.0;
  const double duration = cfg.n_frames > 0 ? (cfg.n_frames - 1) * cfg.dt : 0.0;

  SynthScene scene;
  for (int i = 0; i < cfg.n_cars; ++i) {
    const int lane_rank = i / 2 + 1;
    const double lane = (i % 2 == 0 ? 1.0 : -1.0) * cfg.lane_spacing * lane_rank;
    const double speed = cfg.speed_min + (cfg.speed_max - cfg.speed_min) * unit(rng);
    const double mid_offset = -10.0 + 20.0 * unit(rng);
    const double s0 = mid_offset - (speed - ego_speed) * duration / 2.0;
    const auto [x0, y0] = road_to_city(s0, lane);
    scene.cars.push_back({"car_" + std::to_string(i),
                          {x0, y0, cfg.ground_z + cfg.car_height / 2.0},
                          speed * heading_c,
                          speed * heading_s});
  }

  Sequence& seq = scene.sequence;
  seq.cameras.push_back(front_camera());
  seq.has_ground_truth = true;

  const double half_l = cfg.car_length / 2.0;
  const double half_w = cfg.car_width / 2.0;
  const double half_h = cfg.car_height / 2.0;
  const std::array<double, 5> face_areas = {
      cfg.car_length * cfg.car_width,                                   // top
      cfg.car_width * cfg.car_height, cfg.car_width * cfg.car_height,   // front, back
      cfg.car_length * cfg.car_height, cfg.car_length * cfg.car_height  // left, right
  };
  std::discrete_distribution<int> pick_face(face_areas.begin(), face_areas.end());
  const auto n_ground =
      static_cast<std::size_t>(std::llround(cfg.ground_density * 4.0 * cfg.sensor_range * cfg.sensor_range));
  const double range = cfg.sensor_range;

  for (int k = 0; k < cfg.n_frames; ++k) {
    const double t = k * cfg.dt;
    Frame frame;
    frame.index = k;
    frame.timestamp = t;
    const auto [ex, ey] = road_to_city(ego_speed * t, 0.0);
    frame.ego_pose = RigidTransform::from_yaw(cfg.ego_heading, {ex, ey, 0.0}, kEgoFrame, kCityFrame);
    const RigidTransform city_to_ego = invert(frame.ego_pose);
    auto& pts = frame.cloud.points;
    pts.reserve(n_ground + static_cast<std::size_t>(cfg.n_cars * cfg.points_per_car + cfg.clutter_points));

    for (std::size_t g = 0; g < n_ground; ++g) {
      const double x = -range + 2.0 * range * unit(rng);
      const double y = -range + 2.0 * range * unit(rng);
      pts.push_back(to_float_precision({x, y, cfg.ground_z + noise()}));
    }

    std::vector<GroundTruthBox> boxes;
    for (const auto& car : scene.cars) {
      const Vec3 center{car.start.x + car.vx * t, car.start.y + car.vy * t, car.start.z};
      // Car-local axes: forward along the heading, left perpendicular.
      auto local_to_ego = [&](double fx, double ly, double uz) {
        const Vec3 city{center.x + fx * heading_c - ly * heading_s,
                        center.y + fx * heading_s + ly * heading_c, center.z + uz};
        return city_to_ego.apply(city);
      };
      bool visible = true;
      for (const double fx : {-half_l, half_l}) {
        for (const double ly : {-half_w, half_w}) {
          const Vec3 e = local_to_ego(fx, ly, 0.0);
          visible = visible && std::abs(e.x) <= range && std::abs(e.y) <= range;
        }
      }
      if (!visible) {
        continue;
      }
      boxes.push_back({car.id, center, cfg.car_length, cfg.car_width, cfg.car_height});

      for (int p = 0; p < cfg.points_per_car; ++p) {
        const int face = pick_face(rng);
        const double a = unit(rng);
        const double b = unit(rng);
        double fx = 0.0;
        double ly = 0.0;
        double uz = 0.0;
        switch (face) {
          case 0:
            fx = (2 * a - 1) * half_l, ly = (2 * b - 1) * half_w, uz = half_h;
            break;
          case 1:
          case 2:
            fx = face == 1 ? half_l : -half_l, ly = (2 * a - 1) * half_w, uz = (2 * b - 1) * half_h;
            break;
          default:
            fx = (2 * a - 1) * half_l, ly = face == 3 ? half_w : -half_w, uz = (2 * b - 1) * half_h;
            break;
        }
        const Vec3 e = local_to_ego(fx, ly, uz);
        pts.push_back(to_float_precision({e.x + noise(), e.y + noise(), e.z + noise()}));
      }

      if (cfg.write_masks) {
        const CameraModel& cam = seq.cameras.front();
        double u_lo = 1e300, u_hi = -1e300, v_lo = 1e300, v_hi = -1e300;
        bool in_front = true;
        for (const double fx : {-half_l, half_l}) {
          for (const double ly : {-half_w, half_w}) {
            for (const double uz : {-half_h, half_h}) {
              const Vec3 c = cam.ego_to_camera.apply(local_to_ego(fx, ly, uz));
              if (!(c.z > 0.0)) {
                in_front = false;
                continue;
              }
              const double u = cam.fx * c.x / c.z + cam.cx;
              const double v = cam.fy * c.y / c.z + cam.cy;
              u_lo = std::min(u_lo, u), u_hi = std::max(u_hi, u);
              v_lo = std::min(v_lo, v), v_hi = std::max(v_hi, v);
            }
          }
        }
        u_lo = std::max(u_lo, 0.0), v_lo = std::max(v_lo, 0.0);
        u_hi = std::min(u_hi, cam.width - 1.0), v_hi = std::min(v_hi, cam.height - 1.0);
        if (in_front && u_lo < u_hi && v_lo < v_hi) {
          frame.masks.push_back(
              {cam.id, {{u_lo, v_lo}, {u_hi, v_lo}, {u_hi, v_hi}, {u_lo, v_hi}}});
        }
      }
    }

    for (int c = 0; c < cfg.clutter_points; ++c) {
      const double x = -range + 2.0 * range * unit(rng);
      const double y = -range + 2.0 * range * unit(rng);
      const double z = cfg.ground_z + 0.3 + (1.0 - cfg.ground_z - 0.3) * unit(rng);
      pts.push_back(to_float_precision({x, y, z}));
    }

    if (!boxes.empty()) {
      seq.ground_truth[frame.index] = std::move(boxes);
    }
    seq.frames.push_back(std::move(frame));
  }

  // Drivable band: every lane plus a margin, along the whole ego route.
  const int lane_ranks = std::max(1, (cfg.n_cars + 1) / 2);
  const double band = cfg.lane_spacing * lane_ranks + half_w + 2.0;
  const double s_lo = -range - 10.0;
  const double s_hi = ego_speed * duration + range + 10.0;
  const double l_extent = band + 15.0;
  double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
  for (const double s : {s_lo, s_hi}) {
    for (const double l : {-l_extent, l_extent}) {
      const auto [x, y] = road_to_city(s, l);
      x_lo = std::min(x_lo, x), x_hi = std::max(x_hi, x);
      y_lo = std::min(y_lo, y), y_hi = std::max(y_hi, y);
    }
  }
  DrivableGrid grid;
  grid.resolution = cfg.drivable_resolution;
  grid.origin_x = std::floor(x_lo);
  grid.origin_y = std::floor(y_lo);
  grid.width = static_cast<int>(std::ceil((x_hi - grid.origin_x) / grid.resolution));
  grid.height = static_cast<int>(std::ceil((y_hi - grid.origin_y) / grid.resolution));
  grid.bits.assign(static_cast<std::size_t>(grid.width) * static_cast<std::size_t>(grid.height), false);
  for (int row = 0; row < grid.height; ++row) {
    for (int col = 0; col < grid.width; ++col) {
      const double x = grid.origin_x + (col + 0.5) * grid.resolution - cfg.ego_start_x;
      const double y = grid.origin_y + (row + 0.5) * grid.resolution - cfg.ego_start_y;
      const double s = x * heading_c + y * heading_s;
      const double l = -x * heading_s + y * heading_c;
      if (s >= s_lo && s <= s_hi && std::abs(l) <= band) {
        grid.bits[static_cast<std::size_t>(row) * static_cast<std::size_t>(grid.width) +
                  static_cast<std::size_t>(col)] = true;
      }
    }
  }
  seq.drivable = std::move(grid);
  return scene;
}

SynthScene generate(const SynthConfig& cfg, const std::filesystem::path& out) {
  SynthScene scene = make_scene(cfg);
  write_sequence(scene.sequence, out);
  return scene;
}

}  // namespace lidartrack
