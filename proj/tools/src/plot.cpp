#include "lidartrack_cli/plot.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace lidartrack::cli {
namespace {

double yaw_of(const RigidTransform& t) {
  const auto& q = t.rotation();
  return std::atan2(2.0 * (q.w * q.z + q.x * q.y), 1.0 - 2.0 * (q.y * q.y + q.z * q.z));
}

class Canvas {
 public:
  explicit Canvas(const BevView& v)
      : view_(v), scale_(v.pixels / (2.0 * v.half_extent)),
        x0_(v.center_x - v.half_extent), y1_(v.center_y + v.half_extent) {}

  double sx(double x) const { return (x - x0_) * scale_; }
  double sy(double y) const { return (y1_ - y) * scale_; }
  double scale() const { return scale_; }
  bool visible(double x, double y) const {
    return std::abs(x - view_.center_x) <= view_.half_extent &&
           std::abs(y - view_.center_y) <= view_.half_extent;
  }

 private:
  BevView view_;
  double scale_;
  double x0_;
  double y1_;
};

/// Box axis-aligned in a frame rotated by `yaw` (degrees applied as an SVG
/// rotation about the center; SVG y points down, hence the sign flip).
void box(std::ostream& os, const Canvas& c, const char* cls, const Vec3& center, double length,
         double width, double yaw) {
  const double cx = c.sx(center.x);
  const double cy = c.sy(center.y);
  const double w = length * c.scale();
  const double h = width * c.scale();
  os << "<rect class=\"" << cls << "\" x=\"" << cx - w / 2 << "\" y=\"" << cy - h / 2
     << "\" width=\"" << w << "\" height=\"" << h << "\"";
  if (yaw != 0.0) {
    os << " transform=\"rotate(" << -yaw * 180.0 / std::numbers::pi << ' ' << cx << ' ' << cy
       << ")\"";
  }
  os << "/>\n";
}

}  // namespace

std::string render_bev_svg(const BevView& view, const Frame& frame,
                           const std::vector<Vec3>& ego_points,
                           const std::vector<Detection3D>& detections,
                           const std::vector<TrackRecord>& tracks, const DrivableGrid* drivable) {
  const Canvas c(view);
  const double yaw = yaw_of(frame.ego_pose);
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << view.pixels << "\" height=\""
     << view.pixels << "\" viewBox=\"0 0 " << view.pixels << ' ' << view.pixels << "\">\n";
  os << "<style>.drivable{fill:none;stroke:#7aa36f;stroke-width:1}"
        ".axes line{stroke:#999;stroke-width:1}.axes text{font:10px sans-serif;fill:#666}"
        ".points circle{fill:#333}.detection{fill:none;stroke:#1f77b4;stroke-width:1.5}"
        ".track{fill:none;stroke:#d62728;stroke-width:2}"
        ".track-label{font:12px sans-serif;fill:#d62728}</style>\n";
  os << "<title>frame " << frame.index << "</title>\n";

  if (drivable != nullptr) {
    // Boundary edges between drivable and non-drivable cells inside the view.
    const auto& g = *drivable;
    auto is_drivable = [&](int col, int row) {
      return col >= 0 && row >= 0 && col < g.width && row < g.height && g.cell(col, row);
    };
    std::ostringstream path;
    path << std::fixed << std::setprecision(2);
    auto edge = [&](double xa, double ya, double xb, double yb) {
      path << 'M' << c.sx(xa) << ' ' << c.sy(ya) << 'L' << c.sx(xb) << ' ' << c.sy(yb);
    };
    for (int row = 0; row < g.height; ++row) {
      for (int col = 0; col < g.width; ++col) {
        if (!g.cell(col, row)) {
          continue;
        }
        const double x = g.origin_x + col * g.resolution;
        const double y = g.origin_y + row * g.resolution;
        if (!c.visible(x, y)) {
          continue;
        }
        const double r = g.resolution;
        if (!is_drivable(col - 1, row)) edge(x, y, x, y + r);
        if (!is_drivable(col + 1, row)) edge(x + r, y, x + r, y + r);
        if (!is_drivable(col, row - 1)) edge(x, y, x + r, y);
        if (!is_drivable(col, row + 1)) edge(x, y + r, x + r, y + r);
      }
    }
    const std::string d = path.str();
    if (!d.empty()) {
      os << "<path class=\"drivable\" d=\"" << d << "\"/>\n";
    }
  }

  os << "<g class=\"axes\">\n";
  os << "<line x1=\"0\" y1=\"" << c.sy(view.center_y) << "\" x2=\"" << view.pixels << "\" y2=\""
     << c.sy(view.center_y) << "\"/>\n";
  os << "<line x1=\"" << c.sx(view.center_x) << "\" y1=\"0\" x2=\"" << c.sx(view.center_x)
     << "\" y2=\"" << view.pixels << "\"/>\n";
  for (int k = -static_cast<int>(view.half_extent / 10.0); k * 10.0 <= view.half_extent; ++k) {
    const double off = k * 10.0;
    os << "<text x=\"" << c.sx(view.center_x + off) << "\" y=\"" << c.sy(view.center_y) + 12
       << "\">" << static_cast<int>(off) << "</text>\n";
  }
  os << "</g>\n";

  os << "<g class=\"points\">\n";
  for (const auto& p : ego_points) {
    const Vec3 q = frame.ego_pose.apply(p);
    if (c.visible(q.x, q.y)) {
      os << "<circle cx=\"" << c.sx(q.x) << "\" cy=\"" << c.sy(q.y) << "\" r=\"1\"/>\n";
    }
  }
  os << "</g>\n";

  for (const auto& d : detections) {
    box(os, c, "detection", d.center, d.length, d.width, yaw);
  }
  for (const auto& t : tracks) {
    os << "<g data-track-id=\"" << t.track_id << "\">\n";
    box(os, c, "track", t.center, t.length, t.width, yaw);
    os << "<text class=\"track-label\" x=\"" << c.sx(t.center.x) + 4 << "\" y=\""
       << c.sy(t.center.y) - 4 << "\">" << t.track_id << "</text>\n";
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace lidartrack::cli
