#include "salpcc/saliency.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>

#include "salpcc/parallel.hpp"

namespace salpcc {
namespace {

Vec3 orthogonal_unit(const Vec3& g1) {
  const std::array<Vec3, 2> axes{Vec3::UnitX(), Vec3::UnitY()};
  for (const Vec3& axis : axes) {
    const Vec3 v = axis - axis.dot(g1) * g1;
    if (v.norm() > 1e-6) return v.normalized();
  }
  return (Vec3::UnitZ() - Vec3::UnitZ().dot(g1) * g1).normalized();
}

}  // namespace

DarbouxFrame darboux_frame_from(const OrientedPoint& source, const Vec3& target) {
  DarbouxFrame f;
  f.g1 = source.normal.normalized();
  const Vec3 offset = target - source.position;
  const double len = offset.norm();
  Vec3 g2 = len > 0.0 ? Vec3(f.g1.cross(offset / len)) : Vec3::Zero();
  const double g2_norm = g2.norm();
  f.g2 = g2_norm > 1e-12 ? Vec3(g2 / g2_norm) : orthogonal_unit(f.g1);
  f.g3 = f.g1.cross(f.g2);
  return f;
}

DarbouxFrame darboux_frame(const OrientedPoint& first, const OrientedPoint& second) {
  const Vec3 line = second.position - first.position;
  const double len = line.norm();
  if (!(len > 0.0)) throw std::invalid_argument("darboux_frame: coincident points");
  // Larger |cos| means a smaller angle between the normal and the line.
  const double cos_first = std::abs(first.normal.normalized().dot(line / len));
  const double cos_second = std::abs(second.normal.normalized().dot(line / len));
  if (cos_second > cos_first) {
    DarbouxFrame f = darboux_frame_from(second, first.position);
    f.source_is_first = false;
    return f;
  }
  return darboux_frame_from(first, second.position);
}

double inverse_eigen_norm(std::span<const Vec3> vectors) {
  Eigen::Matrix3d r = Eigen::Matrix3d::Zero();
  for (const Vec3& v : vectors) r.noalias() += v * v.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(r, Eigen::EigenvaluesOnly);
  return 1.0 / solver.eigenvalues().norm();
}

std::vector<double> eigen_saliency(std::span<const Vec3> normals, const NeighborGraph& graph) {
  const std::size_t n = graph.size();
  if (normals.size() != n) throw std::invalid_argument("eigen_saliency: normals do not match the graph");
  std::vector<double> s11(n);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    std::vector<Vec3> cols(graph.k() + 1);
    for (std::size_t i = begin; i < end; ++i) {
      cols[0] = normals[i];
      const auto nb = graph.neighbors(i);
      for (std::size_t m = 0; m < nb.size(); ++m) cols[m + 1] = normals[nb[m]];
      s11[i] = inverse_eigen_norm(cols);
    }
  });
  return s11;
}

std::vector<double> curvature_metric(std::span<const Vec3> points, std::span<const Vec3> normals,
                                     const NeighborGraph& graph, std::span<const std::uint32_t> salient) {
  std::vector<double> c(salient.size());
  parallel_for(salient.size(), [&](std::size_t begin, std::size_t end) {
    std::array<std::vector<Vec3>, 3> axes;
    for (auto& a : axes) a.resize(graph.k() + 1);
    for (std::size_t s = begin; s < end; ++s) {
      const std::uint32_t i = salient[s];
      const auto nb = graph.neighbors(i);
      const OrientedPoint pi{points[i], normals[i]};
      const DarbouxFrame own = darboux_frame_from(pi, points[nb[0]]);
      axes[0][0] = own.g1;
      axes[1][0] = own.g2;
      axes[2][0] = own.g3;
      for (std::size_t m = 0; m < nb.size(); ++m) {
        const std::uint32_t j = nb[m];
        const OrientedPoint pj{points[j], normals[j]};
        const DarbouxFrame f = i < j ? darboux_frame(pi, pj) : darboux_frame(pj, pi);
        axes[0][m + 1] = f.g1;
        axes[1][m + 1] = f.g2;
        axes[2][m + 1] = f.g3;
      }
      c[s] = inverse_eigen_norm(axes[0]) + inverse_eigen_norm(axes[1]) + inverse_eigen_norm(axes[2]);
    }
  });
  return c;
}

std::vector<double> curvature_saliency(std::span<const double> c) {
  std::vector<double> s12(c.size());
  if (c.empty()) return s12;
  double c_max = kCurvatureFloor;
  for (double v : c) c_max = std::max(c_max, std::max(v, kCurvatureFloor));
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double ci = std::max(c[i], kCurvatureFloor);
    s12[i] = c_max - 1.0 / (1.0 - std::exp(ci));
  }
  return s12;
}

std::vector<double> min_max_normalize(std::span<const double> values) {
  std::vector<double> out(values.size(), 0.5);
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return out;
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = std::clamp((values[i] - *lo) / range, 0.0, 1.0);
  return out;
}

GeometricSaliency geometric_saliency(std::span<const Vec3> points, std::span<const Vec3> normals,
                                     const NeighborGraph& graph, double s0_factor) {
  GeometricSaliency g;
  g.s11 = eigen_saliency(normals, graph);
  const double mean = g.s11.empty() ? 0.0
                                    : std::accumulate(g.s11.begin(), g.s11.end(), 0.0) /
                                          static_cast<double>(g.s11.size());
  g.s0 = s0_factor * mean;
  for (std::size_t i = 0; i < g.s11.size(); ++i)
    if (g.s11[i] > g.s0) g.salient.push_back(static_cast<std::uint32_t>(i));
  g.curvature = curvature_metric(points, normals, graph, g.salient);
  g.s12 = curvature_saliency(g.curvature);
  g.s1_raw = g.s11;
  for (std::size_t s = 0; s < g.salient.size(); ++s) g.s1_raw[g.salient[s]] = g.s12[s];
  g.s1 = min_max_normalize(g.s1_raw);
  return g;
}

std::vector<double> visibility_saliency(std::span<const double> a) { return {a.begin(), a.end()}; }

std::vector<double> depth_saliency(std::span<const double> depths, const CameraPose& cam) {
  std::vector<double> s3(depths.size());
  const double range = cam.z_far - cam.z_near;
  for (std::size_t i = 0; i < depths.size(); ++i)
    s3[i] = std::clamp(1.0 - (depths[i] - cam.z_near) / range, 0.0, 1.0);
  return s3;
}

FocusSaliency focus_saliency(std::span<const Vec3> points, const CameraPose& cam, double m) {
  FocusSaliency f;
  f.raw.resize(points.size());
  const Vec3 r = cam.view_dir.normalized();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec3 rel = points[i] - cam.eye;
    const double len = rel.norm();
    const double dot = len > 0.0 ? std::clamp(r.dot(rel / len), kFocusDotFloor, 1.0) : kFocusDotFloor;
    f.raw[i] = 1.0 - std::pow(std::sqrt(1.0 / dot), m);
  }
  f.normalized = min_max_normalize(f.raw);
  return f;
}

std::vector<double> extended_saliency(std::span<const double> s1, std::span<const double> s2,
                                      std::span<const double> s3, std::span<const double> s4,
                                      const std::array<double, 4>& w, bool strict_formula) {
  const std::size_t n = s1.size();
  if (s2.size() != n || s3.size() != n || s4.size() != n)
    throw std::invalid_argument("extended_saliency: map sizes differ");
  double total = 0.0;
  for (double wi : w) {
    if (!(wi >= 0.0)) throw std::invalid_argument("saliency weights must be non-negative");
    total += wi;
  }
  if (!(total > 0.0)) throw std::invalid_argument("saliency weights sum to zero");
  const std::span<const double> fourth = strict_formula ? s1 : s4;
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i)
    s[i] = std::clamp((w[0] * s1[i] + w[1] * s2[i] + w[2] * s3[i] + w[3] * fourth[i]) / total, 0.0, 1.0);
  return s;
}

SaliencyBundle compute_saliency(std::span<const Vec3> points, const NormalField& normals,
                                const ScreenProjection& projection, const VisibilityResult& visibility,
                                const CameraPose& cam, const SaliencyParams& params) {
  SaliencyBundle b;
  b.visible_indices = visibility.visible_indices();
  const std::size_t nv = b.visible_indices.size();

  std::vector<Vec3> vp(nv), vn(nv);
  std::vector<double> va(nv), vd(nv);
  for (std::size_t m = 0; m < nv; ++m) {
    const auto i = b.visible_indices[m];
    vp[m] = points[i];
    vn[m] = normals.normals[i];
    va[m] = visibility.a[i];
    vd[m] = projection.depths[i];
  }

  if (nv >= 2) {
    const NeighborGraph graph = build_knn_graph(vp, std::min(params.k_g, nv - 1));
    b.geometric = geometric_saliency(vp, vn, graph, params.s0_factor);
  } else {
    b.geometric.s11.assign(nv, 1.0);
    b.geometric.s1_raw = b.geometric.s11;
    b.geometric.s1 = min_max_normalize(b.geometric.s1_raw);
  }
  b.s2 = visibility_saliency(va);
  b.s3 = depth_saliency(vd, cam);
  b.focus = focus_saliency(vp, cam, params.focus_power);
  b.s = extended_saliency(b.geometric.s1, b.s2, b.s3, b.focus.normalized, params.weights, params.strict_formula);
  return b;
}

}  // namespace salpcc
