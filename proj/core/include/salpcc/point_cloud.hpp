#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace salpcc {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;
using Rgb = std::array<std::uint8_t, 3>;

/// An unorganized set of 3-D points. Colors are optional and only used for
/// display (heatmaps); the codec is geometry-only.
struct PointCloud {
  std::vector<Vec3> vertices;
  std::vector<Rgb> colors;  // empty, or one entry per vertex

  std::size_t size() const noexcept { return vertices.size(); }
  bool empty() const noexcept { return vertices.empty(); }
  bool has_colors() const noexcept { return !colors.empty(); }
};

struct Bounds {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();

  Vec3 extent() const { return max - min; }
  Vec3 center() const { return 0.5 * (min + max); }
  double max_extent() const { return extent().maxCoeff(); }
};

Bounds compute_bounds(std::span<const Vec3> points);

Vec3 centroid(std::span<const Vec3> points);

/// Throws DataError if the cloud is empty, has non-finite coordinates, or a
/// color array of the wrong length.
void validate(const PointCloud& pc);

/// Points selected by `indices`, in that order (colors follow).
PointCloud subset(const PointCloud& pc, std::span<const std::uint32_t> indices);

}  // namespace salpcc
