#pragma once

#include <array>
#include <span>

#include "salpcc/metrics.hpp"

namespace salpcc {

struct RDPoint {
  double bpp = 0.0;
  double d1_psnr = 0.0;
  double d2_psnr = 0.0;
};

inline constexpr std::size_t kBdMinPoints = 4;
inline constexpr std::size_t kBdSamples = 1000;

/// Least-squares cubic PSNR(log10 bpp), lowest order first.
std::array<double, 4> fit_rd_cubic(std::span<const double> log_rate, std::span<const double> psnr);

/// Mean PSNR gap of curve A over curve B on their shared log-rate range.
/// Positive when A lies above B. Throws DataError with fewer than four
/// points per curve, non-positive rates, non-finite PSNRs or no overlap.
double bd_psnr(std::span<const RDPoint> a, std::span<const RDPoint> b, PsnrMode mode);

}  // namespace salpcc
