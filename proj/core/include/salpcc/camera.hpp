#pragma once

#include <vector>

#include "salpcc/point_cloud.hpp"

namespace salpcc {

/// Pinhole viewer: eye position, viewing direction (need not be unit),
/// clip distances, vertical field of view and image size in pixels.
struct CameraPose {
  Vec3 eye = Vec3::Zero();
  Vec3 view_dir = Vec3(0.0, 0.0, -1.0);
  double z_near = 0.1;
  double z_far = 100.0;
  int width = 1024;
  int height = 1024;
  double fov_y_deg = 60.0;

  /// Throws std::invalid_argument on a zero direction, bad clip range or
  /// empty image.
  void validate() const;
};

/// Viewer on the +z side of the cloud looking down -z through the bounding
/// box center, at distance max(2 * half z-extent, max extent) from it, with
/// clip planes at 0.1x and 4x the largest extent.
CameraPose default_camera(const PointCloud& pc);

struct ScreenProjection {
  std::vector<Vec2> pixels;            // pixel coordinates (x right, y down)
  std::vector<double> depths;          // Euclidean distance to the eye
  std::vector<std::uint8_t> in_frustum;

  std::size_t size() const noexcept { return depths.size(); }
};

/// Look-at, perspective and viewport transforms. Points outside the clip
/// volume (including the eye itself and anything behind it) are flagged
/// out-of-frustum; their pixels are left at (0, 0) when undefined.
ScreenProjection project(std::span<const Vec3> points, const CameraPose& cam);

inline ScreenProjection project(const PointCloud& pc, const CameraPose& cam) {
  return project(pc.vertices, cam);
}

}  // namespace salpcc
