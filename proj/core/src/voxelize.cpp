#include "salpcc/voxelize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "salpcc/errors.hpp"

namespace salpcc {

PointCloud voxelize(const PointCloud& pc, int depth) {
  if (depth < 1 || depth > 16) throw std::invalid_argument("voxel depth must be in [1, 16]");
  validate(pc);
  const Bounds b = compute_bounds(pc.vertices);
  const double extent = b.max_extent();
  if (!(extent > 0.0)) throw DataError("cannot voxelize a cloud with zero extent");

  const double top = std::ldexp(1.0, depth) - 1.0;
  const double scale = top / extent;

  PointCloud out;
  out.vertices.reserve(pc.size());
  if (pc.has_colors()) out.colors.reserve(pc.size());
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(pc.size() * 2);
  for (std::size_t i = 0; i < pc.size(); ++i) {
    Vec3 q;
    for (int d = 0; d < 3; ++d) q[d] = std::clamp(std::round((pc.vertices[i][d] - b.min[d]) * scale), 0.0, top);
    const std::uint64_t key = (static_cast<std::uint64_t>(q.x()) << 32) |
                              (static_cast<std::uint64_t>(q.y()) << 16) | static_cast<std::uint64_t>(q.z());
    if (!seen.insert(key).second) continue;
    out.vertices.push_back(q);
    if (pc.has_colors()) out.colors.push_back(pc.colors[i]);
  }
  return out;
}

bool is_voxelized(const PointCloud& pc, int depth) {
  const double top = std::ldexp(1.0, depth) - 1.0;
  for (const Vec3& v : pc.vertices)
    for (int d = 0; d < 3; ++d)
      if (v[d] < 0.0 || v[d] > top || v[d] != std::floor(v[d])) return false;
  return true;
}

}  // namespace salpcc
