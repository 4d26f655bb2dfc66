#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "salpcc/point_cloud.hpp"

namespace salpcc {

struct AnchorSet {
  std::vector<std::uint32_t> indices;             // strictly increasing
  std::vector<std::array<std::uint32_t, 3>> coords;  // voxel coordinates

  std::size_t size() const noexcept { return indices.size(); }
  friend bool operator==(const AnchorSet&, const AnchorSet&) = default;
};

/// max(1, round(fraction * n)).
std::size_t default_anchor_count(std::size_t n, double fraction = 0.01);

/// 3 x 16-bit Morton (Z-order) interleave.
std::uint64_t morton_code(std::uint32_t x, std::uint32_t y, std::uint32_t z);

/// Stable order of the points by Morton code. Requires voxel coordinates.
std::vector<std::uint32_t> morton_permutation(const PointCloud& pc);
PointCloud morton_sorted(const PointCloud& pc);

/// Sorts vertices by Morton code (ties by index) and keeps every
/// floor(n / k_c)-th, which spreads the anchors evenly over the occupied
/// voxels. The cloud must be voxelized (non-negative integer coordinates
/// below 2^16); DataError otherwise.
AnchorSet select_anchors(const PointCloud& pc, std::size_t k_c);

}  // namespace salpcc
