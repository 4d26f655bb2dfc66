#include "salpcc/anchors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "salpcc/errors.hpp"

namespace salpcc {
namespace {

std::uint64_t spread_bits(std::uint32_t v) {
  std::uint64_t x = v & 0xFFFFu;
  x = (x | (x << 16)) & 0x0000FF0000FFull;
  x = (x | (x << 8)) & 0x00F00F00F00Full;
  x = (x | (x << 4)) & 0x0C30C30C30C3ull;
  x = (x | (x << 2)) & 0x249249249249ull;
  return x;
}

std::uint32_t voxel_coord(double v) {
  if (!(v >= 0.0) || v > 65535.0 || v != std::floor(v))
    throw DataError("anchors require voxelized coordinates");
  return static_cast<std::uint32_t>(v);
}

}  // namespace

std::size_t default_anchor_count(std::size_t n, double fraction) {
  const auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  return std::max<std::size_t>(1, k);
}

std::uint64_t morton_code(std::uint32_t x, std::uint32_t y, std::uint32_t z) {
  return (spread_bits(x) << 2) | (spread_bits(y) << 1) | spread_bits(z);
}

std::vector<std::uint32_t> morton_permutation(const PointCloud& pc) {
  std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed(pc.size());
  for (std::size_t i = 0; i < pc.size(); ++i) {
    const Vec3& v = pc.vertices[i];
    keyed[i] = {morton_code(voxel_coord(v.x()), voxel_coord(v.y()), voxel_coord(v.z())), static_cast<std::uint32_t>(i)};
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::uint32_t> order(pc.size());
  for (std::size_t i = 0; i < keyed.size(); ++i) order[i] = keyed[i].second;
  return order;
}

PointCloud morton_sorted(const PointCloud& pc) { return subset(pc, morton_permutation(pc)); }

AnchorSet select_anchors(const PointCloud& pc, std::size_t k_c) {
  const std::size_t n = pc.size();
  if (k_c == 0) throw std::invalid_argument("at least one anchor is required");
  if (n == 0) throw DataError("cannot select anchors of an empty cloud");
  k_c = std::min(k_c, n);

  std::vector<std::array<std::uint32_t, 3>> voxels(n);
  std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& v = pc.vertices[i];
    voxels[i] = {voxel_coord(v.x()), voxel_coord(v.y()), voxel_coord(v.z())};
    keyed[i] = {morton_code(voxels[i][0], voxels[i][1], voxels[i][2]), static_cast<std::uint32_t>(i)};
  }
  std::sort(keyed.begin(), keyed.end());

  const std::size_t step = n / k_c;
  AnchorSet a;
  a.indices.reserve(k_c);
  for (std::size_t m = 0; m < k_c; ++m) a.indices.push_back(keyed[m * step].second);
  std::sort(a.indices.begin(), a.indices.end());
  a.coords.reserve(k_c);
  for (auto i : a.indices) a.coords.push_back(voxels[i]);
  return a;
}

}  // namespace salpcc
