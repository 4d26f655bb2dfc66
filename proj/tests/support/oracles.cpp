#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace salpcc::testing {

std::vector<Neighbor> brute_knn(std::span<const Vec3> points, std::size_t i, std::size_t k) {
  std::vector<Neighbor> all;
  for (std::size_t j = 0; j < points.size(); ++j)
    if (j != i) all.push_back({(points[j] - points[i]).squaredNorm(), static_cast<std::uint32_t>(j)});
  std::sort(all.begin(), all.end());
  all.resize(std::min(k, all.size()));
  return all;
}

Neighbor brute_nearest(std::span<const Vec3> target, const Vec3& q) {
  Neighbor best{std::numeric_limits<double>::infinity(), 0};
  for (std::size_t j = 0; j < target.size(); ++j) {
    const Neighbor c{(target[j] - q).squaredNorm(), static_cast<std::uint32_t>(j)};
    if (c < best) best = c;
  }
  return best;
}

Eigen::MatrixXd dense_laplacian(const NeighborGraph& graph) {
  const auto n = static_cast<Eigen::Index>(graph.size());
  Eigen::MatrixXd l = Eigen::MatrixXd::Identity(n, n);
  const double w = 1.0 / static_cast<double>(graph.k());
  for (Eigen::Index i = 0; i < n; ++i)
    for (auto j : graph.neighbors(static_cast<std::size_t>(i))) l(i, j) -= w;
  return l;
}

Eigen::MatrixXd dense_anchored_solve(const NeighborGraph& graph, const Eigen::MatrixXd& deltas,
                                     std::span<const std::uint32_t> anchor_idx,
                                     const Eigen::MatrixXd& anchor_pos, double weight) {
  const auto n = static_cast<Eigen::Index>(graph.size());
  const auto c = static_cast<Eigen::Index>(anchor_idx.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + c, n);
  a.topRows(n) = dense_laplacian(graph);
  Eigen::MatrixXd b(n + c, deltas.cols());
  b.topRows(n) = deltas;
  for (Eigen::Index r = 0; r < c; ++r) {
    a(n + r, anchor_idx[r]) = weight;
    b.row(n + r) = weight * anchor_pos.row(r);
  }
  return a.completeOrthogonalDecomposition().solve(b);
}

double brute_d_rms(std::span<const Vec3> ref, std::span<const Vec3> deg) {
  double sum = 0.0;
  for (const Vec3& p : ref) sum += brute_nearest(deg, p).dist2;
  return std::sqrt(sum / static_cast<double>(ref.size()));
}

double brute_d_p2plane(std::span<const Vec3> ref, std::span<const Vec3> deg, std::span<const Vec3> normals) {
  double sum = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const Vec3 e = deg[brute_nearest(deg, ref[i]).index] - ref[i];
    const double t = e.dot(normals[i].normalized());
    sum += t * t;
  }
  return std::sqrt(sum / static_cast<double>(ref.size()));
}

namespace {

struct Face {
  std::array<std::uint32_t, 3> v;
  Vec3 normal;
  double offset;
  bool alive = true;
};

std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) { return (static_cast<std::uint64_t>(a) << 32) | b; }

}  // namespace

std::vector<std::uint32_t> convex_hull_vertices(std::span<const Vec3> pts) {
  const std::size_t n = pts.size();
  if (n < 4) throw std::invalid_argument("hull needs 4 points");
  double scale = 0.0;
  for (const Vec3& p : pts) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  const double eps = 1e-12 * std::max(1.0, scale) * std::max(1.0, scale);

  // Initial tetrahedron from extreme points.
  std::uint32_t i0 = 0, i1 = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (pts[i].x() < pts[i0].x()) i0 = i;
    if (pts[i].x() > pts[i1].x()) i1 = i;
  }
  std::uint32_t i2 = 0;
  double best = -1.0;
  for (std::uint32_t i = 0; i < n; ++i) {
    const double d = (pts[i] - pts[i0]).cross(pts[i1] - pts[i0]).squaredNorm();
    if (d > best) best = d, i2 = i;
  }
  std::uint32_t i3 = 0;
  best = -1.0;
  const Vec3 nrm = (pts[i1] - pts[i0]).cross(pts[i2] - pts[i0]);
  for (std::uint32_t i = 0; i < n; ++i) {
    const double d = std::abs(nrm.dot(pts[i] - pts[i0]));
    if (d > best) best = d, i3 = i;
  }
  if (best <= eps) throw std::invalid_argument("hull input is degenerate");

  std::vector<Face> faces;
  std::unordered_map<std::uint64_t, std::size_t> owner;
  const Vec3 inside = (pts[i0] + pts[i1] + pts[i2] + pts[i3]) / 4.0;
  auto add_face = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    Face f{{a, b, c}, (pts[b] - pts[a]).cross(pts[c] - pts[a]), 0.0};
    if (f.normal.dot(inside - pts[a]) > 0.0) {
      std::swap(f.v[1], f.v[2]);
      f.normal = -f.normal;
    }
    f.offset = f.normal.dot(pts[f.v[0]]);
    const std::size_t id = faces.size();
    for (int e = 0; e < 3; ++e) owner[edge_key(f.v[e], f.v[(e + 1) % 3])] = id;
    faces.push_back(f);
  };
  add_face(i0, i1, i2);
  add_face(i0, i1, i3);
  add_face(i0, i2, i3);
  add_face(i1, i2, i3);

  std::vector<std::uint8_t> visible_face;
  for (std::uint32_t p = 0; p < n; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    visible_face.assign(faces.size(), 0);
    bool any = false;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!faces[f].alive) continue;
      if (faces[f].normal.dot(pts[p]) - faces[f].offset > eps * faces[f].normal.norm()) {
        visible_face[f] = 1;
        any = true;
      }
    }
    if (!any) continue;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> horizon;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!visible_face[f]) continue;
      for (int e = 0; e < 3; ++e) {
        const std::uint32_t a = faces[f].v[e], b = faces[f].v[(e + 1) % 3];
        const auto twin = owner.find(edge_key(b, a));
        if (twin == owner.end() || !visible_face[twin->second]) horizon.emplace_back(a, b);
      }
    }
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!visible_face[f]) continue;
      faces[f].alive = false;
      for (int e = 0; e < 3; ++e) {
        const auto key = edge_key(faces[f].v[e], faces[f].v[(e + 1) % 3]);
        if (auto it = owner.find(key); it != owner.end() && it->second == f) owner.erase(it);
      }
    }
    for (const auto& [a, b] : horizon) {
      // Keep the orientation of the removed face: (a, b, p) faces outward.
      Face f{{a, b, p}, (pts[b] - pts[a]).cross(pts[p] - pts[a]), 0.0};
      f.offset = f.normal.dot(pts[a]);
      const std::size_t id = faces.size();
      for (int e = 0; e < 3; ++e) owner[edge_key(f.v[e], f.v[(e + 1) % 3])] = id;
      faces.push_back(f);
    }
  }
  std::vector<std::uint8_t> on_hull(n, 0);
  for (const Face& f : faces)
    if (f.alive)
      for (auto v : f.v) on_hull[v] = 1;
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < n; ++i)
    if (on_hull[i]) out.push_back(i);
  return out;
}

std::vector<std::uint8_t> hpr_visible(std::span<const Vec3> points, const Vec3& eye, double radius_factor) {
  std::vector<Vec3> flipped;
  flipped.reserve(points.size() + 1);
  double max_norm = 0.0;
  for (const Vec3& p : points) max_norm = std::max(max_norm, (p - eye).norm());
  const double radius = radius_factor * max_norm;
  for (const Vec3& p : points) {
    const Vec3 q = p - eye;
    const double len = q.norm();
    flipped.push_back(len > 0.0 ? Vec3(q + 2.0 * (radius - len) * q / len) : q);
  }
  flipped.push_back(Vec3::Zero());
  std::vector<std::uint8_t> vis(points.size(), 0);
  for (auto i : convex_hull_vertices(flipped))
    if (i < points.size()) vis[i] = 1;
  return vis;
}

}  // namespace salpcc::testing
