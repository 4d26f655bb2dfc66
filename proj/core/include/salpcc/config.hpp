#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>

#include "salpcc/camera.hpp"
#include "salpcc/reconstruction.hpp"

namespace salpcc {

enum class QuantizationMode { kSaliencyAware, kUniform };

/// Every tunable of the codec. Defaults follow the reference parameter table;
/// the rest are ours.
struct CodecConfig {
  std::size_t k_n = 6;      // Laplacian neighborhood
  std::size_t k_a = 125;    // screen-space neighborhood for visibility
  std::size_t k_g = 25;     // neighborhood for geometric saliency
  double s0_factor = 2.0;   // s_0 = s0_factor * mean(s11)
  double anchor_fraction = 0.01;
  std::size_t k_c = 0;      // explicit anchor count, 0 = anchor_fraction * n
  std::array<double, 4> weights{1.0, 1.0, 0.1, 0.1};
  double focus_power = 1.0; // m
  double s_thresh = 0.1;
  int voxel_depth = 10;
  std::optional<CameraPose> camera;  // voxel-grid coordinates; unset = default viewer
  double solver_tolerance = 1e-8;
  std::size_t solver_max_iterations = 5000;
  SolverBackend solver_backend = SolverBackend::kAuto;
  double anchor_weight = 1.0;
  bool warm_start = false;
  bool strict_formula = false;
  QuantizationMode quantization = QuantizationMode::kSaliencyAware;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
  /// Flat key=value text, one per line, in a fixed order.
  std::string to_text() const;
};

/// Applies `key=value` lines on top of `base`. '#' starts a comment, blank
/// lines are ignored. Unknown keys and malformed values throw ConfigError.
CodecConfig parse_config(const std::string& text, CodecConfig base = {});
CodecConfig load_config(const std::filesystem::path& path, CodecConfig base = {});
void save_config(const CodecConfig& cfg, const std::filesystem::path& path);

/// Applies a single key/value pair (same keys as the file format).
void set_config_value(CodecConfig& cfg, const std::string& key, const std::string& value);

/// Camera files use the camera.* keys of the config format.
CameraPose parse_camera(const std::string& text);

}  // namespace salpcc
