#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "salpcc/point_cloud.hpp"

namespace salpcc {

/// For every query point, the index of and squared distance to its nearest
/// point in `target` (ties by lower index).
struct NearestMatch {
  std::vector<std::uint32_t> index;
  std::vector<double> dist2;
};
NearestMatch nearest_neighbors(std::span<const Vec3> queries, std::span<const Vec3> target);

/// One-sided point-to-point RMS distance, reference -> degraded.
double d_rms(std::span<const Vec3> reference, std::span<const Vec3> degraded);

/// One-sided point-to-plane RMS distance using unit reference normals.
double d_p2plane(std::span<const Vec3> reference, std::span<const Vec3> degraded,
                 std::span<const Vec3> reference_normals);

using OneSidedMetric = std::function<double(std::span<const Vec3>, std::span<const Vec3>)>;
double symmetric(const OneSidedMetric& metric, std::span<const Vec3> a, std::span<const Vec3> b);

enum class PsnrMode { kD1, kD2 };
enum class BandwidthSource { kDegraded, kReference };

/// 10 log10(bandwidth^2 / d^2); +infinity when d == 0.
double psnr_from_distance(double distance, double bandwidth);
/// Largest axis-aligned extent. Throws DataError when it is zero.
double bandwidth(std::span<const Vec3> points);

struct GeometryErrors {
  double d1 = 0.0;  // symmetric point-to-point distance
  double d2 = 0.0;  // symmetric point-to-plane distance
  double bandwidth = 0.0;
  double d1_psnr = 0.0;
  double d2_psnr = 0.0;
};

struct MetricOptions {
  BandwidthSource bandwidth = BandwidthSource::kDegraded;
  std::size_t normal_k = 12;  // neighborhood for normals when none are given
};

/// Normals are estimated on each cloud when not supplied.
GeometryErrors geometry_errors(std::span<const Vec3> reference, std::span<const Vec3> degraded,
                               const MetricOptions& options = {},
                               std::optional<std::span<const Vec3>> reference_normals = std::nullopt,
                               std::optional<std::span<const Vec3>> degraded_normals = std::nullopt);

double psnr_geom(std::span<const Vec3> reference, std::span<const Vec3> degraded, PsnrMode mode,
                 const MetricOptions& options = {});

/// Unit normals from a k-neighborhood (k clamped to n-1). A single point gets +z.
std::vector<Vec3> metric_normals(std::span<const Vec3> points, std::size_t k);

struct ErrorHeatmap {
  PointCloud cloud;  // reference geometry colored blue (min) to red (max)
  std::vector<double> distances;
  double mean = 0.0;
  double max = 0.0;
};
Rgb heat_color(double t);
ErrorHeatmap error_heatmap(std::span<const Vec3> reference, std::span<const Vec3> degraded);

inline constexpr double kLayer1Min = 0.7;
inline constexpr double kLayer2Min = 0.4;
inline constexpr int kLayerCount = 4;

/// Labels 1..4 for every point of the cloud.
struct LayerPartition {
  std::vector<std::uint8_t> labels;
  std::vector<std::uint32_t> members(int layer) const;
};
int layer_of(double saliency);
/// `saliency[m]` belongs to point `visible_indices[m]`; others go to layer 4.
LayerPartition partition_layers(std::size_t n, std::span<const std::uint32_t> visible_indices,
                                std::span<const double> saliency);

struct LayerResult {
  int layer = 0;
  std::size_t count = 0;
  bool present = false;
  double d1 = 0.0;
  double d1_psnr = 0.0;
};

/// Per-layer D1. Reference points of a layer are matched against the whole
/// degraded cloud; when both clouds share indexing, the degraded points of
/// the layer are also matched against the whole reference and the larger
/// distance is kept. PSNR uses the bandwidth of the full cloud selected by
/// `source`.
std::array<LayerResult, kLayerCount> layer_report(const LayerPartition& partition,
                                                  std::span<const Vec3> reference,
                                                  std::span<const Vec3> degraded,
                                                  BandwidthSource source = BandwidthSource::kDegraded);

}  // namespace salpcc
