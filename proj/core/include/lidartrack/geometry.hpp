#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>

namespace lidartrack {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;

  double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline bool is_finite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

/// Squared Euclidean distance, summed in x, y, z order. Every radius test in
/// the library goes through this so that index and scan agree bit for bit.
inline double squared_distance(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

/// Scalar-first unit quaternion (w, x, y, z).
struct Quaternion {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }
  friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

/// Rigid motion mapping points expressed in `from_frame` into `to_frame`:
/// p_to = R * p_from + t.
class RigidTransform {
 public:
  /// Identity with empty frame labels.
  RigidTransform() = default;

  /// Normalizes `rotation`; throws std::invalid_argument on a zero or
  /// non-finite quaternion or non-finite translation.
  RigidTransform(Quaternion rotation, Vec3 translation, std::string from_frame,
                 std::string to_frame);

  static RigidTransform identity(const std::string& frame) { return {{}, {}, frame, frame}; }
  static RigidTransform from_yaw(double yaw, Vec3 translation, std::string from_frame,
                                 std::string to_frame);

  const Quaternion& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }
  const std::string& from_frame() const { return from_frame_; }
  const std::string& to_frame() const { return to_frame_; }

  /// Row-major 3x3 rotation matrix.
  const std::array<double, 9>& rotation_matrix() const { return matrix_; }

  Vec3 rotate(const Vec3& p) const;
  Vec3 apply(const Vec3& p) const { return rotate(p) + translation_; }

 private:
  Quaternion rotation_;
  Vec3 translation_;
  std::string from_frame_;
  std::string to_frame_;
  std::array<double, 9> matrix_{1, 0, 0, 0, 1, 0, 0, 0, 1};
};

/// Applies `b` then `a`. Requires a.from_frame() == b.to_frame(); throws
/// FrameError otherwise.
RigidTransform compose(const RigidTransform& a, const RigidTransform& b);
RigidTransform invert(const RigidTransform& t);
inline Vec3 transform_point(const RigidTransform& t, const Vec3& p) { return t.apply(p); }

struct Pixel {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;
};

/// Ideal pinhole camera. Camera frame convention: +z along the optical axis,
/// +x towards increasing u, +y towards increasing v.
struct CameraModel {
  std::string id;
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 1;
  int height = 1;
  RigidTransform ego_to_camera;

  /// Throws std::invalid_argument when intrinsics violate fx, fy > 0,
  /// 0 <= cx < width, 0 <= cy < height.
  void validate() const;

  bool in_image(double u, double v) const {
    return u >= 0.0 && u < static_cast<double>(width) && v >= 0.0 &&
           v < static_cast<double>(height);
  }
};

/// Pinhole projection of a camera-frame point; absent when behind the camera
/// or outside the image.
std::optional<Pixel> project_camera_point(const CameraModel& cam, const Vec3& p_camera);

/// Transforms an ego-frame point into the camera and projects it.
std::optional<Pixel> project_to_image(const CameraModel& cam, const Vec3& p_ego);

/// Camera-frame point at the pixel's depth.
Vec3 unproject(const CameraModel& cam, const Pixel& px);

}  // namespace lidartrack
