#include "lidartrack/geometry.hpp"

#include <Eigen/Geometry>
#include <stdexcept>

#include "lidartrack/errors.hpp"

namespace lidartrack {
namespace {

Eigen::Quaterniond to_eigen(const Quaternion& q) { return {q.w, q.x, q.y, q.z}; }
Quaternion from_eigen(const Eigen::Quaterniond& q) { return {q.w(), q.x(), q.y(), q.z()}; }

}  // namespace

RigidTransform::RigidTransform(Quaternion rotation, Vec3 translation, std::string from_frame,
                               std::string to_frame)
    : translation_(translation), from_frame_(std::move(from_frame)), to_frame_(std::move(to_frame)) {
  const double n = rotation.norm();
  if (!std::isfinite(n) || n == 0.0) {
    throw std::invalid_argument("rotation quaternion must be finite and non-zero");
  }
  if (!is_finite(translation)) {
    throw std::invalid_argument("translation must be finite");
  }
  rotation_ = {rotation.w / n, rotation.x / n, rotation.y / n, rotation.z / n};
  const Eigen::Matrix3d m = to_eigen(rotation_).toRotationMatrix();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      matrix_[static_cast<std::size_t>(r * 3 + c)] = m(r, c);
    }
  }
}

RigidTransform RigidTransform::from_yaw(double yaw, Vec3 translation, std::string from_frame,
                                        std::string to_frame) {
  const Quaternion q{std::cos(yaw / 2.0), 0.0, 0.0, std::sin(yaw / 2.0)};
  return {q, translation, std::move(from_frame), std::move(to_frame)};
}

Vec3 RigidTransform::rotate(const Vec3& p) const {
  const auto& m = matrix_;
  return {m[0] * p.x + m[1] * p.y + m[2] * p.z, m[3] * p.x + m[4] * p.y + m[5] * p.z,
          m[6] * p.x + m[7] * p.y + m[8] * p.z};
}

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  if (a.from_frame() != b.to_frame()) {
    throw FrameError("cannot compose '" + a.from_frame() + "'->'" + a.to_frame() + "' after '" +
                     b.from_frame() + "'->'" + b.to_frame() + "': frame '" + b.to_frame() +
                     "' does not match '" + a.from_frame() + "'");
  }
  const Eigen::Quaterniond q = to_eigen(a.rotation()) * to_eigen(b.rotation());
  return {from_eigen(q), a.apply(b.translation()), b.from_frame(), a.to_frame()};
}

RigidTransform invert(const RigidTransform& t) {
  const Eigen::Quaterniond q = to_eigen(t.rotation()).conjugate();
  const Eigen::Vector3d p(t.translation().x, t.translation().y, t.translation().z);
  const Eigen::Vector3d inv_t = -(q * p);
  return {from_eigen(q), {inv_t.x(), inv_t.y(), inv_t.z()}, t.to_frame(), t.from_frame()};
}

void CameraModel::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw std::invalid_argument("camera '" + id + "': focal lengths must be positive");
  }
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("camera '" + id + "': image size must be positive");
  }
  if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height)) {
    throw std::invalid_argument("camera '" + id + "': principal point outside the image");
  }
}

std::optional<Pixel> project_camera_point(const CameraModel& cam, const Vec3& p) {
  if (!(p.z > 0.0)) {
    return std::nullopt;
  }
  const double u = cam.fx * p.x / p.z + cam.cx;
  const double v = cam.fy * p.y / p.z + cam.cy;
  if (!cam.in_image(u, v)) {
    return std::nullopt;
  }
  return Pixel{u, v, p.z};
}

std::optional<Pixel> project_to_image(const CameraModel& cam, const Vec3& p_ego) {
  return project_camera_point(cam, cam.ego_to_camera.apply(p_ego));
}

Vec3 unproject(const CameraModel& cam, const Pixel& px) {
  return {(px.u - cam.cx) * px.depth / cam.fx, (px.v - cam.cy) * px.depth / cam.fy, px.depth};
}

}  // namespace lidartrack
