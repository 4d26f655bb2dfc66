#pragma once

#include "salpcc/point_cloud.hpp"

namespace salpcc {

/// Maps the cloud affinely onto the integer grid [0, 2^depth - 1]^3 (uniform
/// scale so the longest axis spans the full grid, each axis starting at 0),
/// rounds to the nearest voxel and merges duplicates keeping the first
/// occurrence. Output order follows first occurrences in the input.
///
/// Requires 1 <= depth <= 16 (std::invalid_argument) and a non-degenerate
/// extent (DataError).
PointCloud voxelize(const PointCloud& pc, int depth);

/// True when every coordinate is an integer inside [0, 2^depth - 1].
bool is_voxelized(const PointCloud& pc, int depth);

}  // namespace salpcc
