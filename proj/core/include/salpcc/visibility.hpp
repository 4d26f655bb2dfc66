#pragma once

#include <cstdint>
#include <vector>

#include "salpcc/camera.hpp"

namespace salpcc {

/// Per-point visibility operator a in [0, 1]: each in-frustum point is
/// compared with its k_a nearest in-frustum points in screen space,
///
///   a_i = exp(-(d_i - d_min)^2 / (d_max - d_min)^2)
///
/// where the depth range is taken over the point and its neighbors. A zero
/// depth range gives 1; out-of-frustum points get 0.
std::vector<double> visibility_operator(const ScreenProjection& proj, std::size_t k_a);

struct VisibilityResult {
  std::vector<double> a;
  std::vector<std::uint8_t> visible;  // 1 = visible
  double threshold = 0.0;
  std::size_t visible_count = 0;

  /// Indices of visible points in ascending order.
  std::vector<std::uint32_t> visible_indices() const;
};

/// Threshold at the mean of a; a point is visible iff a_i > 0 and
/// a_i >= threshold. Throws DataError when no point qualifies.
VisibilityResult classify_visible(std::vector<double> a);

}  // namespace salpcc
