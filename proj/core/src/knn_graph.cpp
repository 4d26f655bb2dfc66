#include "salpcc/knn_graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "salpcc/parallel.hpp"

namespace salpcc {

NeighborGraph::NeighborGraph(std::size_t k, std::vector<std::uint32_t> table)
    : k_(k), table_(std::move(table)) {
  if (k_ == 0) throw std::invalid_argument("neighbor graph needs k >= 1");
  if (table_.size() % k_ != 0) throw std::invalid_argument("neighbor table size is not a multiple of k");
  const std::size_t n = size();
  std::vector<std::uint32_t> row(k_);
  for (std::size_t i = 0; i < n; ++i) {
    const auto nb = neighbors(i);
    for (auto j : nb) {
      if (j >= n) throw std::invalid_argument("neighbor index out of range in row " + std::to_string(i));
      if (j == i) throw std::invalid_argument("row " + std::to_string(i) + " lists itself");
    }
    std::copy(nb.begin(), nb.end(), row.begin());
    std::sort(row.begin(), row.end());
    if (std::adjacent_find(row.begin(), row.end()) != row.end())
      throw std::invalid_argument("duplicate neighbor in row " + std::to_string(i));
  }
}

KdTree<3> make_kdtree(std::span<const Vec3> points) {
  std::vector<KdTree<3>::Point> pts(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) pts[i] = {points[i].x(), points[i].y(), points[i].z()};
  return KdTree<3>(std::move(pts));
}

NeighborGraph build_knn_graph(std::span<const Vec3> points, std::size_t k) {
  const std::size_t n = points.size();
  if (k == 0) throw std::invalid_argument("k must be at least 1");
  if (k >= n)
    throw std::invalid_argument("k = " + std::to_string(k) + " requires more than " + std::to_string(k) +
                                " points, cloud has " + std::to_string(n));
  const KdTree<3> tree = make_kdtree(points);
  std::vector<std::uint32_t> table(n * k);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    std::vector<Neighbor> found;
    for (std::size_t i = begin; i < end; ++i) {
      tree.knn(tree.point(static_cast<std::uint32_t>(i)), k, static_cast<std::uint32_t>(i), found);
      for (std::size_t m = 0; m < k; ++m) table[i * k + m] = found[m].index;
    }
  });
  return NeighborGraph(k, std::move(table));
}

}  // namespace salpcc
