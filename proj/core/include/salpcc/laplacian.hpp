#pragma once

#include <span>
#include <vector>

#include "salpcc/knn_graph.hpp"
#include "salpcc/point_cloud.hpp"

namespace salpcc {

// Random-walk normalized Laplacian L = I - D^-1 C of a kNN graph. The same
// operator defines the delta coordinates and the reconstruction system.

/// out_i = x_i - (1/k) sum_{j in N(i)} x_j for one scalar column.
void laplacian_apply(const NeighborGraph& graph, std::span<const double> x, std::span<double> out);

/// Row-wise application to an n x 3 field. Throws std::invalid_argument on a
/// row-count mismatch.
std::vector<Vec3> laplacian_apply(const NeighborGraph& graph, std::span<const Vec3> values);

/// Incoming-edge lists of the graph (CSR), used to apply L^T with a gather.
struct ReverseAdjacency {
  std::vector<std::uint32_t> offsets;  // n + 1
  std::vector<std::uint32_t> sources;  // ascending within each row
};

ReverseAdjacency reverse_adjacency(const NeighborGraph& graph);

/// out = L^T y.
void laplacian_transpose_apply(const NeighborGraph& graph, const ReverseAdjacency& reverse,
                               std::span<const double> y, std::span<double> out);

struct DeltaCoords {
  std::vector<Vec3> deltas;
};

/// delta_i = v_i minus the barycenter of its neighbors.
DeltaCoords delta_coordinates(std::span<const Vec3> points, const NeighborGraph& graph);

inline DeltaCoords delta_coordinates(const PointCloud& pc, const NeighborGraph& graph) {
  return delta_coordinates(pc.vertices, graph);
}

}  // namespace salpcc
