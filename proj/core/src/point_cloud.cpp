#include "salpcc/point_cloud.hpp"

#include <cmath>
#include <limits>

#include "salpcc/errors.hpp"

namespace salpcc {

Bounds compute_bounds(std::span<const Vec3> points) {
  Bounds b;
  if (points.empty()) return b;
  b.min = Vec3::Constant(std::numeric_limits<double>::infinity());
  b.max = Vec3::Constant(-std::numeric_limits<double>::infinity());
  for (const Vec3& p : points) {
    b.min = b.min.cwiseMin(p);
    b.max = b.max.cwiseMax(p);
  }
  return b;
}

Vec3 centroid(std::span<const Vec3> points) {
  Vec3 sum = Vec3::Zero();
  for (const Vec3& p : points) sum += p;
  return points.empty() ? sum : Vec3(sum / static_cast<double>(points.size()));
}

void validate(const PointCloud& pc) {
  if (pc.empty()) throw DataError("point cloud is empty");
  if (pc.has_colors() && pc.colors.size() != pc.size())
    throw DataError("color count does not match vertex count");
  for (std::size_t i = 0; i < pc.size(); ++i)
    if (!pc.vertices[i].allFinite())
      throw DataError("vertex " + std::to_string(i) + " has a non-finite coordinate");
}

PointCloud subset(const PointCloud& pc, std::span<const std::uint32_t> indices) {
  PointCloud out;
  out.vertices.reserve(indices.size());
  for (auto i : indices) out.vertices.push_back(pc.vertices.at(i));
  if (pc.has_colors()) {
    out.colors.reserve(indices.size());
    for (auto i : indices) out.colors.push_back(pc.colors.at(i));
  }
  return out;
}

}  // namespace salpcc
