#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <salpcc/point_cloud.hpp>

namespace salpcc::testing {

/// Portable uniform/normal draws on top of mt19937_64 (the std
/// distributions differ between standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

inline constexpr int kFixtureDepth = 10;

struct Fixture {
  std::string name;
  PointCloud cloud;  // already on the depth-10 voxel grid
};

PointCloud tilted_plane(std::size_t n, std::uint64_t seed = 11);
PointCloud fibonacci_sphere(std::size_t n, double radius = 1.0);
/// Points on the surface of the unit cube; `edge_band` (if given) receives
/// 1 for points within 0.05 of a cube edge.
PointCloud cube_surface(std::size_t n, std::uint64_t seed = 13, std::vector<std::uint8_t>* edge_band = nullptr);
PointCloud noisy_torus(std::size_t n, std::uint64_t seed = 17);
/// A sphere in front of a box, seen from +z.
PointCloud two_object_scene(std::size_t n, std::uint64_t seed = 19);

PointCloud on_grid(const PointCloud& pc);

/// The five acceptance fixtures: plane 2k, sphere 5k, cube 5k, torus 10k,
/// scene 20k (voxelized, so counts can be slightly lower).
const std::vector<Fixture>& standard_fixtures();
const Fixture& fixture(const std::string& name);

}  // namespace salpcc::testing
