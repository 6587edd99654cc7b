#include "lidartrack/dataset_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"
#include "lidartrack/errors.hpp"

namespace lidartrack {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kSequenceFormat = "lidartrack-sequence";
constexpr const char* kTracksFormat = "lidartrack-tracks";
constexpr int kFormatVersion = 1;

[[noreturn]] void fail(const fs::path& file, const std::string& what) {
  throw DataError(file.string() + ": " + what);
}

json read_json(const fs::path& file) {
  std::ifstream in(file);
  if (!in) {
    fail(file, "cannot open file");
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(file, "malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

void write_json(const fs::path& file, const json& doc) {
  std::ofstream out(file, std::ios::trunc);
  if (!out) {
    fail(file, "cannot open file for writing");
  }
  out << doc.dump(1) << '\n';
  if (!out) {
    fail(file, "write failed");
  }
}

std::string frame_stem(std::int64_t index) {
  std::ostringstream s;
  s << std::setw(6) << std::setfill('0') << index;
  return s.str();
}

double finite_number(const json& j, const char* key, const fs::path& file) {
  const auto& v = j.at(key);
  if (!v.is_number()) {
    fail(file, std::string("field '") + key + "' must be a number");
  }
  const double d = v.get<double>();
  if (!std::isfinite(d)) {
    fail(file, std::string("field '") + key + "' must be finite");
  }
  return d;
}

Vec3 vec3_from(const json& j, const fs::path& file) {
  if (!j.is_array() || j.size() != 3) {
    fail(file, "expected a 3-element array");
  }
  Vec3 v{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
  if (!is_finite(v)) {
    fail(file, "non-finite vector component");
  }
  return v;
}

json vec3_to(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

RigidTransform pose_from(const json& j, const std::string& from, const std::string& to,
                         const fs::path& file) {
  const auto& r = j.at("rotation");
  if (!r.is_array() || r.size() != 4) {
    fail(file, "rotation must be [w, x, y, z]");
  }
  try {
    return RigidTransform({r[0].get<double>(), r[1].get<double>(), r[2].get<double>(),
                           r[3].get<double>()},
                          vec3_from(j.at("translation"), file), from, to);
  } catch (const std::invalid_argument& e) {
    fail(file, e.what());
  }
}

json pose_to(const RigidTransform& t) {
  const auto& q = t.rotation();
  return {{"rotation", json::array({q.w, q.x, q.y, q.z})},
          {"translation", vec3_to(t.translation())}};
}

json box_to(std::int64_t frame, const GroundTruthBox& b) {
  return {{"frame", frame},     {"track_id", b.track_id}, {"center", vec3_to(b.center)},
          {"length", b.length}, {"width", b.width},       {"height", b.height}};
}

template <typename Fn>
void for_each_line(const fs::path& file, Fn&& fn) {
  std::ifstream in(file);
  if (!in) {
    fail(file, "cannot open file");
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    try {
      fn(json::parse(line), line_no);
    } catch (const json::exception& e) {
      fail(file, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

}  // namespace

void DrivableGrid::validate() const {
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw std::invalid_argument("drivable grid resolution must be positive");
  }
  if (width < 0 || height < 0) {
    throw std::invalid_argument("drivable grid size must be non-negative");
  }
  if (bits.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("drivable grid bit count does not match width*height");
  }
}

bool DrivableGrid::drivable_at(double x, double y) const {
  const double col = std::floor((x - origin_x) / resolution);
  const double row = std::floor((y - origin_y) / resolution);
  if (!(col >= 0.0 && col < width && row >= 0.0 && row < height)) {
    return false;
  }
  return cell(static_cast<int>(col), static_cast<int>(row));
}

std::vector<Vec3> read_points_bin(const fs::path& file, std::size_t expected_points) {
  std::ifstream in(file, std::ios::binary | std::ios::ate);
  if (!in) {
    fail(file, "cannot open point file");
  }
  const auto bytes = static_cast<std::size_t>(in.tellg());
  if (bytes != expected_points * 12) {
    fail(file, "expected " + std::to_string(expected_points * 12) + " bytes (" +
                   std::to_string(expected_points) + " points), found " + std::to_string(bytes));
  }
  in.seekg(0);
  std::vector<char> raw(bytes);
  in.read(raw.data(), static_cast<std::streamsize>(bytes));
  std::vector<Vec3> points(expected_points);
  for (std::size_t i = 0; i < expected_points; ++i) {
    float xyz[3];
    for (int k = 0; k < 3; ++k) {
      std::uint32_t word;
      std::memcpy(&word, raw.data() + i * 12 + static_cast<std::size_t>(k) * 4, 4);
      if constexpr (std::endian::native == std::endian::big) {
        word = __builtin_bswap32(word);
      }
      std::memcpy(&xyz[k], &word, 4);
    }
    points[i] = {xyz[0], xyz[1], xyz[2]};
    if (!is_finite(points[i])) {
      fail(file, "non-finite point at byte offset " + std::to_string(i * 12));
    }
  }
  return points;
}

void write_points_bin(const fs::path& file, const std::vector<Vec3>& points) {
  std::vector<char> raw(points.size() * 12);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const float xyz[3] = {static_cast<float>(points[i].x), static_cast<float>(points[i].y),
                          static_cast<float>(points[i].z)};
    for (int k = 0; k < 3; ++k) {
      std::uint32_t word;
      std::memcpy(&word, &xyz[k], 4);
      if constexpr (std::endian::native == std::endian::big) {
        word = __builtin_bswap32(word);
      }
      std::memcpy(raw.data() + i * 12 + static_cast<std::size_t>(k) * 4, &word, 4);
    }
  }
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) {
    fail(file, "cannot open point file for writing");
  }
  out.write(raw.data(), static_cast<std::streamsize>(raw.size()));
  if (!out) {
    fail(file, "write failed");
  }
}

std::vector<CameraModel> load_calibration(const fs::path& file) {
  if (!fs::exists(file)) {
    fail(file, "missing calibration file");
  }
  const json doc = read_json(file);
  std::vector<CameraModel> cameras;
  try {
    std::set<std::string> ids;
    for (const auto& c : doc.at("cameras")) {
      CameraModel cam;
      cam.id = c.at("id").get<std::string>();
      if (!ids.insert(cam.id).second) {
        fail(file, "duplicate camera id '" + cam.id + "'");
      }
      const auto& in = c.at("intrinsics");
      cam.fx = finite_number(in, "fx", file);
      cam.fy = finite_number(in, "fy", file);
      cam.cx = finite_number(in, "cx", file);
      cam.cy = finite_number(in, "cy", file);
      cam.width = in.at("width").get<int>();
      cam.height = in.at("height").get<int>();
      cam.ego_to_camera = pose_from(c.at("ego_to_camera"), kEgoFrame, cam.id, file);
      try {
        cam.validate();
      } catch (const std::invalid_argument& e) {
        fail(file, e.what());
      }
      cameras.push_back(std::move(cam));
    }
  } catch (const json::exception& e) {
    fail(file, e.what());
  }
  return cameras;
}

std::map<std::int64_t, std::vector<GroundTruthBox>> read_ground_truth(const fs::path& file) {
  std::map<std::int64_t, std::vector<GroundTruthBox>> gt;
  for_each_line(file, [&](const json& j, std::size_t line_no) {
    GroundTruthBox b;
    const auto frame = j.at("frame").get<std::int64_t>();
    b.track_id = j.at("track_id").is_string() ? j.at("track_id").get<std::string>()
                                              : j.at("track_id").dump();
    b.center = vec3_from(j.at("center"), file);
    b.length = finite_number(j, "length", file);
    b.width = finite_number(j, "width", file);
    b.height = finite_number(j, "height", file);
    if (!(b.length > 0.0 && b.width > 0.0 && b.height > 0.0)) {
      fail(file, "line " + std::to_string(line_no) + ": box dimensions must be positive");
    }
    gt[frame].push_back(std::move(b));
  });
  return gt;
}

void write_ground_truth(const fs::path& file,
                        const std::map<std::int64_t, std::vector<GroundTruthBox>>& gt) {
  std::ofstream out(file, std::ios::trunc);
  if (!out) {
    fail(file, "cannot open file for writing");
  }
  for (const auto& [frame, boxes] : gt) {
    for (const auto& b : boxes) {
      out << box_to(frame, b).dump() << '\n';
    }
  }
}

void write_tracks(const fs::path& file, const std::vector<TrackRecord>& records) {
  std::ofstream out(file, std::ios::trunc);
  if (!out) {
    fail(file, "cannot open tracks file for writing");
  }
  out << json{{"format", kTracksFormat}, {"version", kFormatVersion}}.dump() << '\n';
  for (const auto& r : records) {
    const json j = {{"frame", r.frame},   {"track_id", r.track_id}, {"center", vec3_to(r.center)},
                    {"vx", r.vx},         {"vy", r.vy},             {"length", r.length},
                    {"width", r.width},   {"height", r.height}};
    out << j.dump() << '\n';
  }
  if (!out) {
    fail(file, "write failed");
  }
}

std::vector<TrackRecord> read_tracks(const fs::path& file) {
  std::vector<TrackRecord> records;
  bool saw_header = false;
  for_each_line(file, [&](const json& j, std::size_t line_no) {
    if (!saw_header) {
      if (j.value("format", "") != kTracksFormat) {
        fail(file, "line " + std::to_string(line_no) + ": missing tracks header");
      }
      saw_header = true;
      return;
    }
    TrackRecord r;
    r.frame = j.at("frame").get<std::int64_t>();
    r.track_id = j.at("track_id").get<std::int64_t>();
    r.center = vec3_from(j.at("center"), file);
    r.vx = finite_number(j, "vx", file);
    r.vy = finite_number(j, "vy", file);
    r.length = finite_number(j, "length", file);
    r.width = finite_number(j, "width", file);
    r.height = finite_number(j, "height", file);
    records.push_back(r);
  });
  if (!saw_header) {
    fail(file, "empty tracks file (no header)");
  }
  return records;
}

Sequence load_sequence(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  if (!fs::is_regular_file(manifest_path)) {
    throw DataError(manifest_path.string() + ": missing manifest");
  }
  const json manifest = read_json(manifest_path);

  struct Entry {
    std::int64_t index;
    double timestamp;
    std::size_t num_points;
  };
  std::vector<Entry> entries;
  try {
    if (manifest.value("format", "") != kSequenceFormat) {
      fail(manifest_path, std::string("format must be '") + kSequenceFormat + "'");
    }
    if (manifest.value("version", 0) != kFormatVersion) {
      fail(manifest_path, "unsupported version (expected " + std::to_string(kFormatVersion) + ")");
    }
    std::size_t pos = 0;
    for (const auto& f : manifest.at("frames")) {
      const auto index = f.at("index").get<std::int64_t>();
      if (index < 0) {
        fail(manifest_path, "frames[" + std::to_string(pos) + "]: negative index");
      }
      entries.push_back({index, finite_number(f, "timestamp", manifest_path),
                         f.at("num_points").get<std::size_t>()});
      ++pos;
    }
  } catch (const json::exception& e) {
    fail(manifest_path, e.what());
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.index < b.index; });
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].index == entries[i - 1].index) {
      fail(manifest_path, "duplicate frame index " + std::to_string(entries[i].index));
    }
    if (!(entries[i].timestamp > entries[i - 1].timestamp)) {
      fail(manifest_path, "non-monotone timestamps: frame " + std::to_string(entries[i].index) +
                              " has timestamp " + std::to_string(entries[i].timestamp) +
                              " not after " + std::to_string(entries[i - 1].timestamp));
    }
  }

  Sequence seq;
  seq.cameras = load_calibration(dir / "calibration.json");
  std::set<std::string> camera_ids;
  for (const auto& c : seq.cameras) {
    camera_ids.insert(c.id);
  }

  const fs::path poses_path = dir / "poses.json";
  if (!fs::exists(poses_path)) {
    fail(poses_path, "missing poses file");
  }
  std::map<std::int64_t, RigidTransform> poses;
  {
    const json doc = read_json(poses_path);
    try {
      for (const auto& p : doc.at("poses")) {
        poses[p.at("index").get<std::int64_t>()] = pose_from(p, kEgoFrame, kCityFrame, poses_path);
      }
    } catch (const json::exception& e) {
      fail(poses_path, e.what());
    }
  }

  const fs::path drivable_json = dir / "drivable.json";
  if (fs::exists(drivable_json)) {
    const json doc = read_json(drivable_json);
    DrivableGrid grid;
    try {
      const auto& origin = doc.at("origin_xy");
      grid.origin_x = origin.at(0).get<double>();
      grid.origin_y = origin.at(1).get<double>();
      grid.resolution = finite_number(doc, "resolution", drivable_json);
      grid.width = doc.at("width").get<int>();
      grid.height = doc.at("height").get<int>();
    } catch (const json::exception& e) {
      fail(drivable_json, e.what());
    }
    if (grid.width < 0 || grid.height < 0) {
      fail(drivable_json, "negative grid size");
    }
    const fs::path bin = dir / "drivable.bin";
    std::ifstream in(bin, std::ios::binary);
    if (!in) {
      fail(bin, "missing drivable bitmask");
    }
    const std::vector<unsigned char> raw((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
    const std::size_t cells =
        static_cast<std::size_t>(grid.width) * static_cast<std::size_t>(grid.height);
    if (raw.size() != (cells + 7) / 8) {
      fail(bin, "expected " + std::to_string((cells + 7) / 8) + " bytes, found " +
                    std::to_string(raw.size()));
    }
    grid.bits.resize(cells);
    for (std::size_t i = 0; i < cells; ++i) {
      grid.bits[i] = ((raw[i / 8] >> (i % 8)) & 1U) != 0;
    }
    try {
      grid.validate();
    } catch (const std::invalid_argument& e) {
      fail(drivable_json, e.what());
    }
    seq.drivable = std::move(grid);
  }

  seq.frames.reserve(entries.size());
  for (const auto& e : entries) {
    Frame frame;
    frame.index = e.index;
    frame.timestamp = e.timestamp;
    const auto stem = frame_stem(e.index);
    frame.cloud.points = read_points_bin(dir / "frames" / (stem + ".bin"), e.num_points);
    frame.cloud.frame = kEgoFrame;
    const auto pose = poses.find(e.index);
    if (pose == poses.end()) {
      fail(poses_path, "no pose for frame " + std::to_string(e.index));
    }
    frame.ego_pose = pose->second;

    const fs::path mask_path = dir / "masks" / (stem + ".json");
    if (fs::exists(mask_path)) {
      const json doc = read_json(mask_path);
      try {
        std::size_t pos = 0;
        for (const auto& m : doc.at("masks")) {
          MaskRegion region;
          region.camera_id = m.at("camera_id").get<std::string>();
          if (!camera_ids.contains(region.camera_id)) {
            fail(mask_path, "masks[" + std::to_string(pos) + "] references unknown camera '" +
                                region.camera_id + "'");
          }
          for (const auto& v : m.at("polygon")) {
            region.polygon.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
          }
          if (region.polygon.size() < 3) {
            fail(mask_path, "masks[" + std::to_string(pos) + "] has fewer than 3 vertices");
          }
          frame.masks.push_back(std::move(region));
          ++pos;
        }
      } catch (const json::exception& ex) {
        fail(mask_path, ex.what());
      }
    }
    seq.frames.push_back(std::move(frame));
  }

  const fs::path gt_path = dir / "gt.jsonl";
  if (fs::exists(gt_path)) {
    seq.ground_truth = read_ground_truth(gt_path);
    seq.has_ground_truth = true;
  }
  return seq;
}

void write_sequence(const Sequence& seq, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir / "frames", ec);
  if (ec) {
    fail(dir, "cannot create directory: " + ec.message());
  }

  json frames = json::array();
  json poses = json::array();
  bool any_masks = false;
  for (const auto& f : seq.frames) {
    frames.push_back(
        {{"index", f.index}, {"timestamp", f.timestamp}, {"num_points", f.cloud.points.size()}});
    json pose = pose_to(f.ego_pose);
    pose["index"] = f.index;
    poses.push_back(std::move(pose));
    write_points_bin(dir / "frames" / (frame_stem(f.index) + ".bin"), f.cloud.points);
    any_masks = any_masks || !f.masks.empty();
  }
  write_json(dir / "manifest.json",
             {{"format", kSequenceFormat}, {"version", kFormatVersion}, {"frames", frames}});
  write_json(dir / "poses.json", {{"poses", poses}});

  json cameras = json::array();
  for (const auto& c : seq.cameras) {
    cameras.push_back({{"id", c.id},
                       {"intrinsics",
                        {{"fx", c.fx},
                         {"fy", c.fy},
                         {"cx", c.cx},
                         {"cy", c.cy},
                         {"width", c.width},
                         {"height", c.height}}},
                       {"ego_to_camera", pose_to(c.ego_to_camera)}});
  }
  write_json(dir / "calibration.json", {{"cameras", cameras}});

  if (seq.drivable) {
    const auto& g = *seq.drivable;
    write_json(dir / "drivable.json", {{"origin_xy", json::array({g.origin_x, g.origin_y})},
                                       {"resolution", g.resolution},
                                       {"width", g.width},
                                       {"height", g.height}});
    std::vector<char> raw((g.bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < g.bits.size(); ++i) {
      if (g.bits[i]) {
        raw[i / 8] = static_cast<char>(raw[i / 8] | (1 << (i % 8)));
      }
    }
    std::ofstream out(dir / "drivable.bin", std::ios::binary | std::ios::trunc);
    out.write(raw.data(), static_cast<std::streamsize>(raw.size()));
  }

  if (any_masks) {
    fs::create_directories(dir / "masks");
    for (const auto& f : seq.frames) {
      if (f.masks.empty()) {
        continue;
      }
      json masks = json::array();
      for (const auto& m : f.masks) {
        json poly = json::array();
        for (const auto& [u, v] : m.polygon) {
          poly.push_back(json::array({u, v}));
        }
        masks.push_back({{"camera_id", m.camera_id}, {"polygon", poly}});
      }
      write_json(dir / "masks" / (frame_stem(f.index) + ".json"), {{"masks", masks}});
    }
  }

  if (seq.has_ground_truth) {
    write_ground_truth(dir / "gt.jsonl", seq.ground_truth);
  }
}

}  // namespace lidartrack
