#include "salpcc/normals.hpp"

#include <Eigen/Eigenvalues>

#include "salpcc/parallel.hpp"

namespace salpcc {

NormalField estimate_normals(std::span<const Vec3> points, const NeighborGraph& graph) {
  const std::size_t n = points.size();
  if (graph.size() != n) throw std::invalid_argument("graph does not match the point count");
  const Vec3 center = centroid(points);
  NormalField field;
  field.normals.resize(n);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver;
    for (std::size_t i = begin; i < end; ++i) {
      const auto nb = graph.neighbors(i);
      Vec3 mean = points[i];
      for (auto j : nb) mean += points[j];
      mean /= static_cast<double>(nb.size() + 1);
      Eigen::Matrix3d cov = (points[i] - mean) * (points[i] - mean).transpose();
      for (auto j : nb) cov += (points[j] - mean) * (points[j] - mean).transpose();

      Vec3 normal(0.0, 0.0, 1.0);
      if (cov.trace() > 0.0) {
        solver.compute(cov);
        normal = solver.eigenvectors().col(0).normalized();
      }
      if (normal.dot(points[i] - center) < 0.0) normal = -normal;
      field.normals[i] = normal;
    }
  });
  return field;
}

}  // namespace salpcc
