#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "salpcc/kdtree.hpp"
#include "salpcc/point_cloud.hpp"

namespace salpcc {

/// Directed k-nearest-neighbor graph: row i lists the k nearest other points
/// of vertex i, nearest first (ties by ascending index). This is the
/// adjacency C of the Laplacian; every row has degree k.
class NeighborGraph {
 public:
  NeighborGraph() = default;

  /// Takes a row-major n*k index table. Throws std::invalid_argument unless
  /// every row holds k distinct indices < n, none equal to its own row.
  NeighborGraph(std::size_t k, std::vector<std::uint32_t> table);

  std::size_t k() const noexcept { return k_; }
  std::size_t size() const noexcept { return k_ == 0 ? 0 : table_.size() / k_; }

  std::span<const std::uint32_t> neighbors(std::size_t i) const {
    return {table_.data() + i * k_, k_};
  }
  const std::vector<std::uint32_t>& table() const noexcept { return table_; }

  friend bool operator==(const NeighborGraph&, const NeighborGraph&) = default;

 private:
  std::size_t k_ = 0;
  std::vector<std::uint32_t> table_;
};

KdTree<3> make_kdtree(std::span<const Vec3> points);

/// Requires 1 <= k < n (std::invalid_argument otherwise).
NeighborGraph build_knn_graph(std::span<const Vec3> points, std::size_t k);

inline NeighborGraph build_knn_graph(const PointCloud& pc, std::size_t k) {
  return build_knn_graph(pc.vertices, k);
}

}  // namespace salpcc
