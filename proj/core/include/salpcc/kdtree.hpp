#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace salpcc {

/// A neighbor candidate. Ordering is lexicographic on (squared distance,
/// index), which is the library-wide tie rule for nearest-neighbor queries.
struct Neighbor {
  double dist2 = 0.0;
  std::uint32_t index = 0;

  friend bool operator<(const Neighbor& a, const Neighbor& b) {
    return a.dist2 < b.dist2 || (a.dist2 == b.dist2 && a.index < b.index);
  }
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

inline constexpr std::uint32_t kNoExclusion = std::numeric_limits<std::uint32_t>::max();

/// Static kd-tree over Dim-dimensional points. Queries are exact: results
/// equal an exhaustive scan under the (dist2, index) ordering, ties included.
/// Immutable after construction, so concurrent queries are safe.
template <int Dim>
class KdTree {
 public:
  using Point = std::array<double, Dim>;

  explicit KdTree(std::vector<Point> points, std::uint32_t leaf_size = 12)
      : points_(std::move(points)), order_(points_.size()), leaf_size_(std::max<std::uint32_t>(1, leaf_size)) {
    std::iota(order_.begin(), order_.end(), std::uint32_t{0});
    if (!points_.empty()) {
      nodes_.reserve(2 * points_.size() / leaf_size_ + 2);
      build(0, static_cast<std::uint32_t>(points_.size()));
    }
  }

  std::size_t size() const noexcept { return points_.size(); }
  const Point& point(std::uint32_t i) const { return points_[i]; }

  static double distance2(const Point& a, const Point& b) {
    double d2 = 0.0;
    for (int d = 0; d < Dim; ++d) {
      const double t = a[d] - b[d];
      d2 += t * t;
    }
    return d2;
  }

  /// The k nearest points to `query`, sorted ascending by (dist2, index).
  /// `exclude` drops one index from consideration (self-queries).
  void knn(const Point& query, std::size_t k, std::uint32_t exclude,
           std::vector<Neighbor>& out) const {
    out.clear();
    if (k == 0 || nodes_.empty()) return;
    search(0, query, k, exclude, out);
    std::sort_heap(out.begin(), out.end());
  }

  std::vector<Neighbor> knn(const Point& query, std::size_t k,
                            std::uint32_t exclude = kNoExclusion) const {
    std::vector<Neighbor> out;
    out.reserve(k);
    knn(query, k, exclude, out);
    return out;
  }

 private:
  struct Node {
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    Point lo{};
    Point hi{};
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end) {
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(Node{begin, end});
    Point lo, hi;
    lo.fill(std::numeric_limits<double>::infinity());
    hi.fill(-std::numeric_limits<double>::infinity());
    for (std::uint32_t i = begin; i < end; ++i) {
      const Point& p = points_[order_[i]];
      for (int d = 0; d < Dim; ++d) {
        lo[d] = std::min(lo[d], p[d]);
        hi[d] = std::max(hi[d], p[d]);
      }
    }
    nodes_[id].lo = lo;
    nodes_[id].hi = hi;
    if (end - begin <= leaf_size_) return id;

    int axis = 0;
    for (int d = 1; d < Dim; ++d)
      if (hi[d] - lo[d] > hi[axis] - lo[axis]) axis = d;
    if (hi[axis] == lo[axis]) return id;  // all coincident: keep as leaf

    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                       const double pa = points_[a][axis];
                       const double pb = points_[b][axis];
                       return pa < pb || (pa == pb && a < b);
                     });
    const std::int32_t left = build(begin, mid);
    const std::int32_t right = build(mid, end);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  static double box_distance2(const Node& node, const Point& q) {
    double d2 = 0.0;
    for (int d = 0; d < Dim; ++d) {
      double t = 0.0;
      if (q[d] < node.lo[d])
        t = node.lo[d] - q[d];
      else if (q[d] > node.hi[d])
        t = q[d] - node.hi[d];
      d2 += t * t;
    }
    return d2;
  }

  void search(std::int32_t id, const Point& q, std::size_t k, std::uint32_t exclude,
              std::vector<Neighbor>& heap) const {
    const Node& node = nodes_[id];
    if (node.left < 0) {
      for (std::uint32_t i = node.begin; i < node.end; ++i) {
        const std::uint32_t idx = order_[i];
        if (idx == exclude) continue;
        const Neighbor cand{distance2(points_[idx], q), idx};
        if (heap.size() < k) {
          heap.push_back(cand);
          std::push_heap(heap.begin(), heap.end());
        } else if (cand < heap.front()) {
          std::pop_heap(heap.begin(), heap.end());
          heap.back() = cand;
          std::push_heap(heap.begin(), heap.end());
        }
      }
      return;
    }
    const Node& l = nodes_[node.left];
    const Node& r = nodes_[node.right];
    const double dl = box_distance2(l, q);
    const double dr = box_distance2(r, q);
    const bool left_first = dl <= dr;
    const std::int32_t first = left_first ? node.left : node.right;
    const std::int32_t second = left_first ? node.right : node.left;
    const double d_first = left_first ? dl : dr;
    const double d_second = left_first ? dr : dl;
    // Equal-distance subtrees may still hold lower-index ties, so only prune
    // on strictly greater bounds.
    if (heap.size() < k || d_first <= heap.front().dist2) search(first, q, k, exclude, heap);
    if (heap.size() < k || d_second <= heap.front().dist2) search(second, q, k, exclude, heap);
  }

  std::vector<Point> points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
  std::uint32_t leaf_size_;
};

}  // namespace salpcc
