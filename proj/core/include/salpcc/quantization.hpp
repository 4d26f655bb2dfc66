#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "salpcc/point_cloud.hpp"

namespace salpcc {

using QuantizedDelta = std::array<std::int32_t, 3>;

/// Quantized delta coordinates of a whole cloud. `scale_codes` holds one code
/// per visible point in ascending vertex order; non-visible rows of `q` are 0.
struct QuantizedDeltas {
  std::vector<QuantizedDelta> q;
  std::vector<std::uint8_t> scale_codes;
  float s_thresh = 0.0f;

  friend bool operator==(const QuantizedDeltas&, const QuantizedDeltas&) = default;
};

/// round(255 s) clamped to [1, 255]; a zero code would erase the point.
std::uint8_t scale_code(double saliency);

std::vector<std::uint8_t> quantize_scales(std::span<const double> saliency);

/// Scale shared by encoder and decoder: s_thresh * code / 255, with s_thresh
/// taken at the single precision stored in the stream.
double reconstruction_scale(float s_thresh, std::uint8_t code);

/// Round half away from zero, independent of the floating-point environment.
std::int32_t round_half_away(double v);

/// round(scale_i * delta_i) per component for visible points, 0 otherwise.
/// Throws std::invalid_argument on inconsistent sizes or s_thresh <= 0.
QuantizedDeltas quantize_deltas(std::span<const Vec3> deltas, std::span<const std::uint8_t> visible,
                                std::span<const std::uint8_t> scale_codes, float s_thresh);

}  // namespace salpcc
