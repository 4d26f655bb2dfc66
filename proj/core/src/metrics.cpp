#include "salpcc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "salpcc/errors.hpp"
#include "salpcc/knn_graph.hpp"
#include "salpcc/normals.hpp"
#include "salpcc/parallel.hpp"

namespace salpcc {
namespace {

void require_nonempty(std::span<const Vec3> a, std::span<const Vec3> b) {
  if (a.empty() || b.empty()) throw DataError("metric needs two non-empty clouds");
}

double rms(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return std::sqrt(sum / static_cast<double>(values.size()));
}

}  // namespace

NearestMatch nearest_neighbors(std::span<const Vec3> queries, std::span<const Vec3> target) {
  require_nonempty(queries, target);
  const auto tree = make_kdtree(target);
  NearestMatch out;
  out.index.resize(queries.size());
  out.dist2.resize(queries.size());
  parallel_for(queries.size(), [&](std::size_t begin, std::size_t end) {
    std::vector<Neighbor> nn;
    for (std::size_t i = begin; i < end; ++i) {
      tree.knn({queries[i].x(), queries[i].y(), queries[i].z()}, 1, kNoExclusion, nn);
      out.index[i] = nn.front().index;
      out.dist2[i] = nn.front().dist2;
    }
  });
  return out;
}

double d_rms(std::span<const Vec3> reference, std::span<const Vec3> degraded) {
  return rms(nearest_neighbors(reference, degraded).dist2);
}

double d_p2plane(std::span<const Vec3> reference, std::span<const Vec3> degraded,
                 std::span<const Vec3> reference_normals) {
  if (reference_normals.size() != reference.size())
    throw std::invalid_argument("d_p2plane: one normal per reference point is required");
  const auto match = nearest_neighbors(reference, degraded);
  std::vector<double> proj2(reference.size());
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const Vec3 e = degraded[match.index[i]] - reference[i];
    const double norm = reference_normals[i].norm();
    const double t = norm > 0.0 ? e.dot(reference_normals[i]) / norm : 0.0;
    proj2[i] = t * t;
  }
  return rms(proj2);
}

double symmetric(const OneSidedMetric& metric, std::span<const Vec3> a, std::span<const Vec3> b) {
  return std::max(metric(a, b), metric(b, a));
}

double psnr_from_distance(double distance, double bw) {
  if (!(bw > 0.0)) throw DataError("PSNR bandwidth must be positive");
  if (distance == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(bw * bw / (distance * distance));
}

double bandwidth(std::span<const Vec3> points) {
  if (points.empty()) throw DataError("bandwidth of an empty cloud");
  const double bw = compute_bounds(points).max_extent();
  if (!(bw > 0.0)) throw DataError("cloud has zero extent; PSNR bandwidth undefined");
  return bw;
}

std::vector<Vec3> metric_normals(std::span<const Vec3> points, std::size_t k) {
  if (points.size() < 2) return std::vector<Vec3>(points.size(), Vec3::UnitZ());
  const auto graph = build_knn_graph(points, std::min(k, points.size() - 1));
  return estimate_normals(points, graph).normals;
}

GeometryErrors geometry_errors(std::span<const Vec3> reference, std::span<const Vec3> degraded,
                               const MetricOptions& options,
                               std::optional<std::span<const Vec3>> reference_normals,
                               std::optional<std::span<const Vec3>> degraded_normals) {
  require_nonempty(reference, degraded);
  std::vector<Vec3> ref_n, deg_n;
  if (!reference_normals) {
    ref_n = metric_normals(reference, options.normal_k);
    reference_normals = ref_n;
  }
  if (!degraded_normals) {
    deg_n = metric_normals(degraded, options.normal_k);
    degraded_normals = deg_n;
  }
  GeometryErrors out;
  out.d1 = std::max(d_rms(reference, degraded), d_rms(degraded, reference));
  out.d2 = std::max(d_p2plane(reference, degraded, *reference_normals),
                    d_p2plane(degraded, reference, *degraded_normals));
  out.bandwidth = bandwidth(options.bandwidth == BandwidthSource::kDegraded ? degraded : reference);
  out.d1_psnr = psnr_from_distance(out.d1, out.bandwidth);
  out.d2_psnr = psnr_from_distance(out.d2, out.bandwidth);
  return out;
}

double psnr_geom(std::span<const Vec3> reference, std::span<const Vec3> degraded, PsnrMode mode,
                 const MetricOptions& options) {
  require_nonempty(reference, degraded);
  if (mode == PsnrMode::kD1) {
    const double bw = bandwidth(options.bandwidth == BandwidthSource::kDegraded ? degraded : reference);
    return psnr_from_distance(std::max(d_rms(reference, degraded), d_rms(degraded, reference)), bw);
  }
  return geometry_errors(reference, degraded, options).d2_psnr;
}

Rgb heat_color(double t) {
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
  // blue -> cyan -> green -> yellow -> red
  const double r = std::clamp(4.0 * t - 2.0, 0.0, 1.0);
  const double g = t < 0.25 ? 4.0 * t : (t > 0.75 ? 4.0 * (1.0 - t) : 1.0);
  const double b = std::clamp(2.0 - 4.0 * t, 0.0, 1.0);
  auto byte = [](double v) { return static_cast<std::uint8_t>(std::lround(255.0 * v)); };
  return {byte(r), byte(g), byte(b)};
}

ErrorHeatmap error_heatmap(std::span<const Vec3> reference, std::span<const Vec3> degraded) {
  const auto match = nearest_neighbors(reference, degraded);
  ErrorHeatmap out;
  out.cloud.vertices.assign(reference.begin(), reference.end());
  out.distances.resize(reference.size());
  double lo = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    out.distances[i] = std::sqrt(match.dist2[i]);
    sum += out.distances[i];
    lo = std::min(lo, out.distances[i]);
    out.max = std::max(out.max, out.distances[i]);
  }
  out.mean = sum / static_cast<double>(reference.size());
  const double span = out.max - lo;
  out.cloud.colors.resize(reference.size());
  for (std::size_t i = 0; i < reference.size(); ++i)
    out.cloud.colors[i] = heat_color(span > 0.0 ? (out.distances[i] - lo) / span : 0.0);
  return out;
}

std::vector<std::uint32_t> LayerPartition::members(int layer) const {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == layer) out.push_back(static_cast<std::uint32_t>(i));
  return out;
}

int layer_of(double saliency) {
  if (saliency > kLayer1Min) return 1;
  if (saliency > kLayer2Min) return 2;
  return 3;
}

LayerPartition partition_layers(std::size_t n, std::span<const std::uint32_t> visible_indices,
                                std::span<const double> saliency) {
  if (visible_indices.size() != saliency.size())
    throw std::invalid_argument("partition_layers: one saliency value per visible point is required");
  LayerPartition p;
  p.labels.assign(n, 4);
  for (std::size_t m = 0; m < visible_indices.size(); ++m) {
    if (visible_indices[m] >= n) throw std::invalid_argument("partition_layers: index out of range");
    p.labels[visible_indices[m]] = static_cast<std::uint8_t>(layer_of(saliency[m]));
  }
  return p;
}

std::array<LayerResult, kLayerCount> layer_report(const LayerPartition& partition,
                                                  std::span<const Vec3> reference,
                                                  std::span<const Vec3> degraded,
                                                  BandwidthSource source) {
  if (partition.labels.size() != reference.size())
    throw std::invalid_argument("layer_report: partition does not match the reference cloud");
  require_nonempty(reference, degraded);
  const bool paired = reference.size() == degraded.size();
  const double bw = bandwidth(source == BandwidthSource::kDegraded ? degraded : reference);
  const auto ref_match = nearest_neighbors(reference, degraded);
  NearestMatch deg_match;
  if (paired) deg_match = nearest_neighbors(degraded, reference);

  std::array<LayerResult, kLayerCount> out;
  for (int l = 1; l <= kLayerCount; ++l) {
    auto& r = out[l - 1];
    r.layer = l;
    double fwd = 0.0, bwd = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
      if (partition.labels[i] != l) continue;
      ++r.count;
      fwd += ref_match.dist2[i];
      if (paired) bwd += deg_match.dist2[i];
    }
    if (r.count == 0) continue;
    r.present = true;
    r.d1 = std::sqrt(std::max(fwd, bwd) / static_cast<double>(r.count));
    r.d1_psnr = psnr_from_distance(r.d1, bw);
  }
  return out;
}

}  // namespace salpcc
