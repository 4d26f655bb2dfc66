#include "salpcc/visibility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "salpcc/errors.hpp"
#include "salpcc/kdtree.hpp"
#include "salpcc/parallel.hpp"

namespace salpcc {

std::vector<double> visibility_operator(const ScreenProjection& proj, std::size_t k_a) {
  if (k_a == 0) throw std::invalid_argument("k_a must be at least 1");
  const std::size_t n = proj.size();
  std::vector<std::uint32_t> inside;
  for (std::size_t i = 0; i < n; ++i)
    if (proj.in_frustum[i]) inside.push_back(static_cast<std::uint32_t>(i));

  std::vector<double> a(n, 0.0);
  if (inside.empty()) return a;

  std::vector<KdTree<2>::Point> pts(inside.size());
  for (std::size_t m = 0; m < inside.size(); ++m) pts[m] = {proj.pixels[inside[m]].x(), proj.pixels[inside[m]].y()};
  const KdTree<2> tree(std::move(pts));
  const std::size_t k = std::min(k_a, inside.size() - 1);

  parallel_for(inside.size(), [&](std::size_t begin, std::size_t end) {
    std::vector<Neighbor> found;
    for (std::size_t m = begin; m < end; ++m) {
      const std::uint32_t i = inside[m];
      tree.knn(tree.point(static_cast<std::uint32_t>(m)), k, static_cast<std::uint32_t>(m), found);
      double d_min = proj.depths[i];
      double d_max = proj.depths[i];
      for (const Neighbor& nb : found) {
        const double d = proj.depths[inside[nb.index]];
        d_min = std::min(d_min, d);
        d_max = std::max(d_max, d);
      }
      const double spread = d_max - d_min;
      if (!(spread > 0.0)) {
        a[i] = 1.0;
      } else {
        const double t = (proj.depths[i] - d_min) / spread;
        a[i] = std::exp(-t * t);
      }
    }
  });
  return a;
}

std::vector<std::uint32_t> VisibilityResult::visible_indices() const {
  std::vector<std::uint32_t> idx;
  idx.reserve(visible_count);
  for (std::size_t i = 0; i < visible.size(); ++i)
    if (visible[i]) idx.push_back(static_cast<std::uint32_t>(i));
  return idx;
}

VisibilityResult classify_visible(std::vector<double> a) {
  if (a.empty()) throw std::invalid_argument("visibility operator is empty");
  VisibilityResult r;
  long double sum = 0.0L;
  double lo = a.front(), hi = a.front();
  for (double v : a) {
    sum += v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  // The mean lies in [min, max]; clamping keeps equal values on the visible side.
  r.threshold = std::clamp(static_cast<double>(sum / static_cast<long double>(a.size())), lo, hi);
  r.visible.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    r.visible[i] = a[i] > 0.0 && a[i] >= r.threshold;
    r.visible_count += r.visible[i];
  }
  r.a = std::move(a);
  if (r.visible_count == 0) throw DataError("no point is visible from the camera");
  return r;
}

}  // namespace salpcc
