#include "salpcc/quantization.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace salpcc {

std::uint8_t scale_code(double saliency) {
  const double c = std::round(255.0 * std::clamp(saliency, 0.0, 1.0));
  return static_cast<std::uint8_t>(std::clamp(c, 1.0, 255.0));
}

std::vector<std::uint8_t> quantize_scales(std::span<const double> saliency) {
  std::vector<std::uint8_t> codes(saliency.size());
  std::transform(saliency.begin(), saliency.end(), codes.begin(), scale_code);
  return codes;
}

double reconstruction_scale(float s_thresh, std::uint8_t code) {
  return static_cast<double>(s_thresh) * static_cast<double>(code) / 255.0;
}

std::int32_t round_half_away(double v) {
  const double r = std::round(v);
  if (!(std::abs(r) <= 2147483647.0)) throw std::out_of_range("quantized delta does not fit in 32 bits");
  return static_cast<std::int32_t>(r);
}

QuantizedDeltas quantize_deltas(std::span<const Vec3> deltas, std::span<const std::uint8_t> visible,
                                std::span<const std::uint8_t> scale_codes, float s_thresh) {
  if (deltas.size() != visible.size()) throw std::invalid_argument("quantize_deltas: mask size mismatch");
  if (!(s_thresh > 0.0f)) throw std::invalid_argument("s_thresh must be positive");
  const auto nv = static_cast<std::size_t>(std::count_if(visible.begin(), visible.end(), [](auto v) { return v != 0; }));
  if (scale_codes.size() != nv) throw std::invalid_argument("quantize_deltas: one scale code per visible point expected");

  QuantizedDeltas out;
  out.s_thresh = s_thresh;
  out.scale_codes.assign(scale_codes.begin(), scale_codes.end());
  out.q.assign(deltas.size(), QuantizedDelta{0, 0, 0});
  std::size_t m = 0;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!visible[i]) continue;
    const double scale = reconstruction_scale(s_thresh, scale_codes[m++]);
    for (int d = 0; d < 3; ++d) out.q[i][d] = round_half_away(scale * deltas[i][d]);
  }
  return out;
}

}  // namespace salpcc
