#pragma once

#include <vector>

#include "salpcc/knn_graph.hpp"
#include "salpcc/point_cloud.hpp"

namespace salpcc {

struct NormalField {
  std::vector<Vec3> normals;  // unit length
};

/// PCA normals: for each vertex, the eigenvector of smallest eigenvalue of
/// the covariance of the vertex and its graph neighbors, oriented away from
/// the cloud centroid. Fully coincident neighborhoods get (0, 0, 1).
NormalField estimate_normals(std::span<const Vec3> points, const NeighborGraph& graph);

inline NormalField estimate_normals(const PointCloud& pc, const NeighborGraph& graph) {
  return estimate_normals(pc.vertices, graph);
}

}  // namespace salpcc
