#include "salpcc/laplacian.hpp"

#include <stdexcept>

#include "salpcc/parallel.hpp"

namespace salpcc {

void laplacian_apply(const NeighborGraph& graph, std::span<const double> x, std::span<double> out) {
  const std::size_t n = graph.size();
  if (x.size() != n || out.size() != n) throw std::invalid_argument("laplacian_apply: dimension mismatch");
  const double inv_k = 1.0 / static_cast<double>(graph.k());
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double sum = 0.0;
      for (auto j : graph.neighbors(i)) sum += x[j];
      out[i] = x[i] - sum * inv_k;
    }
  }, 4096);
}

std::vector<Vec3> laplacian_apply(const NeighborGraph& graph, std::span<const Vec3> values) {
  const std::size_t n = graph.size();
  if (values.size() != n) throw std::invalid_argument("laplacian_apply: dimension mismatch");
  const double inv_k = 1.0 / static_cast<double>(graph.k());
  std::vector<Vec3> out(n);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Vec3 sum = Vec3::Zero();
      for (auto j : graph.neighbors(i)) sum += values[j];
      out[i] = values[i] - sum * inv_k;
    }
  });
  return out;
}

ReverseAdjacency reverse_adjacency(const NeighborGraph& graph) {
  const std::size_t n = graph.size();
  ReverseAdjacency r;
  r.offsets.assign(n + 1, 0);
  for (auto j : graph.table()) ++r.offsets[j + 1];
  for (std::size_t i = 0; i < n; ++i) r.offsets[i + 1] += r.offsets[i];
  r.sources.resize(graph.table().size());
  std::vector<std::uint32_t> fill(r.offsets.begin(), r.offsets.end() - 1);
  for (std::size_t i = 0; i < n; ++i)
    for (auto j : graph.neighbors(i)) r.sources[fill[j]++] = static_cast<std::uint32_t>(i);
  return r;
}

void laplacian_transpose_apply(const NeighborGraph& graph, const ReverseAdjacency& reverse,
                               std::span<const double> y, std::span<double> out) {
  const std::size_t n = graph.size();
  if (y.size() != n || out.size() != n) throw std::invalid_argument("laplacian_transpose_apply: dimension mismatch");
  const double inv_k = 1.0 / static_cast<double>(graph.k());
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      double sum = 0.0;
      for (auto e = reverse.offsets[j]; e < reverse.offsets[j + 1]; ++e) sum += y[reverse.sources[e]];
      out[j] = y[j] - sum * inv_k;
    }
  }, 4096);
}

DeltaCoords delta_coordinates(std::span<const Vec3> points, const NeighborGraph& graph) {
  if (graph.size() != points.size()) throw std::invalid_argument("graph does not match the point count");
  DeltaCoords d;
  d.deltas.resize(points.size());
  const double k = static_cast<double>(graph.k());
  for (std::size_t i = 0; i < points.size(); ++i) {
    Vec3 barycenter = Vec3::Zero();
    for (auto j : graph.neighbors(i)) barycenter += points[j];
    d.deltas[i] = points[i] - barycenter / k;
  }
  return d;
}

}  // namespace salpcc
