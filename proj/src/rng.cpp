#include "foresee/rng.hpp"

#include <cmath>

#include "foresee/errors.hpp"

namespace foresee {

double RngStream::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] so the log is finite.
  const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = next_uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

double RngStream::next_gamma(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0)) {
    throw NonPositiveShapeError("gamma sampler requires positive shape and scale");
  }
  if (shape < 1.0) {
    // Boost: Gamma(k) = Gamma(k+1) * U^(1/k).
    const double u = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    return next_gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = next_gaussian();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v * scale;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v * scale;
  }
}

}  // namespace foresee
