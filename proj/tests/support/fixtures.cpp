#include "fixtures.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <salpcc/voxelize.hpp>

namespace salpcc::testing {

double Rng::normal() {
  // Box-Muller; the second variate is dropped to keep the stream simple.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

PointCloud on_grid(const PointCloud& pc) { return voxelize(pc, kFixtureDepth); }

PointCloud tilted_plane(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  PointCloud pc;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.uniform(), y = rng.uniform();
    pc.vertices.emplace_back(x, y, 0.3 * x + 0.1 * y);
  }
  return pc;
}

PointCloud fibonacci_sphere(std::size_t n, double radius) {
  PointCloud pc;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    const double r = std::sqrt(1.0 - z * z);
    const double t = golden * static_cast<double>(i);
    pc.vertices.emplace_back(radius * r * std::cos(t), radius * r * std::sin(t), radius * z);
  }
  return pc;
}

PointCloud cube_surface(std::size_t n, std::uint64_t seed, std::vector<std::uint8_t>* edge_band) {
  Rng rng(seed);
  PointCloud pc;
  for (std::size_t i = 0; i < n; ++i) {
    const int face = static_cast<int>(rng.next() % 6);
    const double u = rng.uniform(), v = rng.uniform();
    const double fixed = face % 2 == 0 ? 0.0 : 1.0;
    switch (face / 2) {
      case 0: pc.vertices.emplace_back(fixed, u, v); break;
      case 1: pc.vertices.emplace_back(u, fixed, v); break;
      default: pc.vertices.emplace_back(u, v, fixed); break;
    }
  }
  pc = on_grid(pc);
  if (edge_band) {
    edge_band->clear();
    const double top = std::ldexp(1.0, kFixtureDepth) - 1.0;
    for (const Vec3& p : pc.vertices) {
      int near_faces = 0;
      for (int d = 0; d < 3; ++d)
        if (p[d] <= 0.05 * top || p[d] >= 0.95 * top) ++near_faces;
      edge_band->push_back(near_faces >= 2);
    }
  }
  return pc;
}

PointCloud noisy_torus(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  PointCloud pc;
  const double big = 1.0, small = 0.35, sigma = 0.01;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double v = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double rr = small + sigma * rng.normal();
    pc.vertices.emplace_back((big + rr * std::cos(v)) * std::cos(u), (big + rr * std::cos(v)) * std::sin(u),
                             rr * std::sin(v));
  }
  return pc;
}

PointCloud two_object_scene(std::size_t n, std::uint64_t seed) {
  PointCloud pc = fibonacci_sphere(2 * n / 5, 0.5);
  for (auto& p : pc.vertices) p += Vec3(0.2, 0.1, 0.9);
  const PointCloud box = cube_surface(n - pc.size(), seed);
  const double top = std::ldexp(1.0, kFixtureDepth) - 1.0;
  for (const Vec3& p : box.vertices) pc.vertices.push_back(Vec3(1.6 * p.x(), 1.2 * p.y(), 0.8 * p.z()) / top - Vec3(0.3, 0.2, 0.4));
  return pc;
}

const std::vector<Fixture>& standard_fixtures() {
  static const std::vector<Fixture> fixtures = [] {
    std::vector<Fixture> f;
    f.push_back({"plane", on_grid(tilted_plane(2000))});
    f.push_back({"sphere", on_grid(fibonacci_sphere(5000))});
    f.push_back({"cube", cube_surface(5000)});
    f.push_back({"torus", on_grid(noisy_torus(10000))});
    f.push_back({"scene", on_grid(two_object_scene(20000))});
    return f;
  }();
  return fixtures;
}

const Fixture& fixture(const std::string& name) {
  for (const auto& f : standard_fixtures())
    if (f.name == name) return f;
  throw std::out_of_range("unknown fixture " + name);
}

}  // namespace salpcc::testing
