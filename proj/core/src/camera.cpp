#include "salpcc/camera.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Geometry>

namespace salpcc {

void CameraPose::validate() const {
  if (!eye.allFinite() || !view_dir.allFinite()) throw std::invalid_argument("camera has non-finite pose");
  if (!(view_dir.norm() > 0.0)) throw std::invalid_argument("camera view direction is zero");
  if (!(z_near > 0.0) || !(z_near < z_far)) throw std::invalid_argument("camera needs 0 < z_near < z_far");
  if (width < 1 || height < 1) throw std::invalid_argument("camera image size must be positive");
  if (!(fov_y_deg > 0.0 && fov_y_deg < 180.0)) throw std::invalid_argument("camera fov must be in (0, 180)");
}

CameraPose default_camera(const PointCloud& pc) {
  const Bounds b = compute_bounds(pc.vertices);
  const Vec3 c = b.center();
  const double extent = std::max(b.max_extent(), 1e-12);
  const double half_z = b.max.z() - c.z();
  const double offset = std::max(2.0 * half_z, extent);
  CameraPose cam;
  cam.eye = Vec3(c.x(), c.y(), c.z() + offset);
  cam.view_dir = Vec3(0.0, 0.0, -offset);
  cam.z_near = 0.1 * extent;
  cam.z_far = 4.0 * extent;
  return cam;
}

ScreenProjection project(std::span<const Vec3> points, const CameraPose& cam) {
  cam.validate();
  const Vec3 f = cam.view_dir.normalized();
  Vec3 up(0.0, 1.0, 0.0);
  if (std::abs(f.dot(up)) > 0.999) up = Vec3(0.0, 0.0, 1.0);
  const Vec3 s = f.cross(up).normalized();
  const Vec3 u = s.cross(f);

  const double tan_half = std::tan(0.5 * cam.fov_y_deg * std::numbers::pi / 180.0);
  const double aspect = static_cast<double>(cam.width) / static_cast<double>(cam.height);

  ScreenProjection proj;
  proj.pixels.assign(points.size(), Vec2::Zero());
  proj.depths.resize(points.size());
  proj.in_frustum.assign(points.size(), 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec3 rel = points[i] - cam.eye;
    proj.depths[i] = rel.norm();
    const double zv = rel.dot(f);
    if (!(zv > 0.0)) continue;
    const double xn = rel.dot(s) / (zv * tan_half * aspect);
    const double yn = rel.dot(u) / (zv * tan_half);
    proj.pixels[i] = Vec2(0.5 * (xn + 1.0) * cam.width, 0.5 * (1.0 - yn) * cam.height);
    proj.in_frustum[i] = zv >= cam.z_near && zv <= cam.z_far && std::abs(xn) <= 1.0 && std::abs(yn) <= 1.0;
  }
  return proj;
}

}  // namespace salpcc
