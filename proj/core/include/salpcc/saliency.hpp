#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "salpcc/camera.hpp"
#include "salpcc/knn_graph.hpp"
#include "salpcc/normals.hpp"
#include "salpcc/visibility.hpp"

namespace salpcc {

struct SaliencyParams {
  std::size_t k_g = 25;
  double s0_factor = 2.0;  // s_0 = s0_factor * mean(s11)
  double focus_power = 1.0;
  std::array<double, 4> weights{1.0, 1.0, 0.1, 0.1};
  /// Literal combination formula, whose fourth term reuses the
  /// geometric map instead of the focus map.
  bool strict_formula = false;
};

inline constexpr double kCurvatureFloor = 1e-3;
inline constexpr double kFocusDotFloor = 1e-3;

/// Orthonormal local frame built at a source point towards a target point.
struct DarbouxFrame {
  Vec3 g1, g2, g3;
  bool source_is_first = true;
};

struct OrientedPoint {
  Vec3 position;
  Vec3 normal;
};

/// The source is the point whose normal makes the smaller angle with the
/// connecting line (ties go to `first`); g1 is its normal, g2 the normalized
/// g1 x direction, g3 = g1 x g2. A normal parallel to the line falls back to
/// Gram-Schmidt against world x, then y.
DarbouxFrame darboux_frame(const OrientedPoint& first, const OrientedPoint& second);

/// Frame with `source` forced as the source point.
DarbouxFrame darboux_frame_from(const OrientedPoint& source, const Vec3& target);

/// 1 / ||eig(M M^T)||_2 for the 3 x m matrix whose columns are `vectors`.
double inverse_eigen_norm(std::span<const Vec3> vectors);

/// s11 for every vertex of `graph`: inverse eigenvalue norm of the normals of
/// the vertex and its neighbors.
std::vector<double> eigen_saliency(std::span<const Vec3> normals, const NeighborGraph& graph);

/// Local curvature metric c_i for each vertex in `salient`: sum over the
/// three Darboux axes of the inverse eigenvalue norm of that axis gathered
/// across the k_g + 1 frames of the neighborhood. The first frame is built at
/// the vertex itself towards its nearest neighbor; the others come from the
/// (vertex, neighbor) pairs under the source/target rule.
std::vector<double> curvature_metric(std::span<const Vec3> points, std::span<const Vec3> normals,
                                     const NeighborGraph& graph, std::span<const std::uint32_t> salient);

/// s12_i = max(c) - 1 / (1 - e^{c_i}), with c clamped below at kCurvatureFloor.
std::vector<double> curvature_saliency(std::span<const double> c);

/// Min-max normalization to [0, 1]; a constant input maps to 0.5.
std::vector<double> min_max_normalize(std::span<const double> values);

struct GeometricSaliency {
  std::vector<double> s11;
  double s0 = 0.0;
  std::vector<std::uint32_t> salient;  // positions with s11 > s0
  std::vector<double> curvature;       // per salient position
  std::vector<double> s12;             // per salient position
  std::vector<double> s1_raw;
  std::vector<double> s1;              // normalized
};

GeometricSaliency geometric_saliency(std::span<const Vec3> points, std::span<const Vec3> normals,
                                     const NeighborGraph& graph, double s0_factor);

std::vector<double> visibility_saliency(std::span<const double> a);

/// 1 - (d - z_near) / (z_far - z_near), clamped to [0, 1].
std::vector<double> depth_saliency(std::span<const double> depths, const CameraPose& cam);

struct FocusSaliency {
  std::vector<double> raw;
  std::vector<double> normalized;
};

/// s4 = 1 - sqrt(1 / dot)^m with dot = clamp(r . p, kFocusDotFloor, 1), where
/// r is the unit viewing direction and p the unit vector from the eye to the
/// point; then min-max normalized.
FocusSaliency focus_saliency(std::span<const Vec3> points, const CameraPose& cam, double m);

/// Weighted average of the four maps. Throws std::invalid_argument for
/// negative weights or a zero weight sum.
std::vector<double> extended_saliency(std::span<const double> s1, std::span<const double> s2,
                                      std::span<const double> s3, std::span<const double> s4,
                                      const std::array<double, 4>& w, bool strict_formula = false);

/// All maps over the visible subset, indexed like `visible_indices`.
struct SaliencyBundle {
  std::vector<std::uint32_t> visible_indices;
  GeometricSaliency geometric;
  std::vector<double> s2;
  std::vector<double> s3;
  FocusSaliency focus;
  std::vector<double> s;

  std::size_t size() const noexcept { return visible_indices.size(); }
};

SaliencyBundle compute_saliency(std::span<const Vec3> points, const NormalField& normals,
                                const ScreenProjection& projection, const VisibilityResult& visibility,
                                const CameraPose& cam, const SaliencyParams& params);

}  // namespace salpcc
