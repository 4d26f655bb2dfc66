#include "salpcc/bd_psnr.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "salpcc/errors.hpp"

namespace salpcc {
namespace {

struct Curve {
  std::vector<double> x;
  std::vector<double> y;
};

Curve prepare(std::span<const RDPoint> points, PsnrMode mode, const char* name) {
  if (points.size() < kBdMinPoints)
    throw DataError(std::string("BD-PSNR: curve ") + name + " needs at least 4 points");
  Curve c;
  for (const auto& p : points) {
    const double y = mode == PsnrMode::kD1 ? p.d1_psnr : p.d2_psnr;
    if (!(p.bpp > 0.0) || !std::isfinite(p.bpp)) throw DataError("BD-PSNR: rates must be positive");
    if (!std::isfinite(y)) throw DataError("BD-PSNR: PSNR values must be finite");
    c.x.push_back(std::log10(p.bpp));
    c.y.push_back(y);
  }
  return c;
}

double eval(const std::array<double, 4>& c, double x) { return ((c[3] * x + c[2]) * x + c[1]) * x + c[0]; }

}  // namespace

std::array<double, 4> fit_rd_cubic(std::span<const double> log_rate, std::span<const double> psnr) {
  const auto n = static_cast<Eigen::Index>(log_rate.size());
  Eigen::MatrixXd v(n, 4);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = log_rate[i];
    v.row(i) << 1.0, x, x * x, x * x * x;
    y[i] = psnr[i];
  }
  const Eigen::VectorXd c = v.colPivHouseholderQr().solve(y);
  return {c[0], c[1], c[2], c[3]};
}

double bd_psnr(std::span<const RDPoint> a, std::span<const RDPoint> b, PsnrMode mode) {
  const Curve ca = prepare(a, mode, "A");
  const Curve cb = prepare(b, mode, "B");
  const double lo = std::max(*std::min_element(ca.x.begin(), ca.x.end()), *std::min_element(cb.x.begin(), cb.x.end()));
  const double hi = std::min(*std::max_element(ca.x.begin(), ca.x.end()), *std::max_element(cb.x.begin(), cb.x.end()));
  if (!(hi > lo)) throw DataError("BD-PSNR: the curves do not overlap in rate");

  const auto pa = fit_rd_cubic(ca.x, ca.y);
  const auto pb = fit_rd_cubic(cb.x, cb.y);
  const double h = (hi - lo) / static_cast<double>(kBdSamples - 1);
  double integral = 0.0;
  double prev = eval(pa, lo) - eval(pb, lo);
  for (std::size_t i = 1; i < kBdSamples; ++i) {
    const double x = i + 1 == kBdSamples ? hi : lo + h * static_cast<double>(i);
    const double cur = eval(pa, x) - eval(pb, x);
    integral += 0.5 * h * (prev + cur);
    prev = cur;
  }
  return integral / (hi - lo);
}

}  // namespace salpcc
