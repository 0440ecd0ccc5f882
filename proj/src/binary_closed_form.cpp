#include "rsobolev/errors.hpp"
#include "rsobolev/sobolev.hpp"

#include <cmath>
#include <numbers>

namespace rsobolev {

double binary_divergence(double y) {
  if (!(y >= 0.0 && y <= 1.0)) throw ValidationError("y must lie in [0, 1]");
  y = std::min(y, 1.0 - y);
  if (y == 0.0) return std::numbers::ln2;
  if (y < 0.25) return std::numbers::ln2 + y * std::log(y) + (1.0 - y) * std::log1p(-y);
  const double d = 0.5 - y;
  return 0.5 * std::log1p(-4.0 * d * d) + 2.0 * d * std::atanh(2.0 * d);
}

double binary_y_of_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= std::numbers::ln2))
    throw ValidationError("alpha must lie in [0, ln 2] for the two-point chain");
  if (alpha == 0.0) return 0.5;
  if (alpha == std::numbers::ln2) return 0.0;
  double lo = 0.0, hi = 0.5;  // divergence decreases in y
  for (int it = 0; it < 4000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (binary_divergence(mid) >= alpha)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

double binary_xi_of_y(double q, double y) {
  if (!(q >= 0.0) || std::isinf(q)) throw ValidationError("q must be finite and nonnegative");
  if (!(y >= 0.0 && y <= 0.5)) throw ValidationError("y must lie in [0, 1/2]");
  if (q == 0.0) {
    const double s = std::sinh(std::sqrt(2.0 * binary_divergence(y)));
    return s * s;
  }
  if (y == 0.0) return q > 1.0 ? 0.5 / (q - 1.0) : std::numeric_limits<double>::infinity();
  const double l = y >= 0.25 ? 2.0 * std::atanh(1.0 - 2.0 * y) : std::log1p(-y) - std::log(y);
  if (q == 1.0) return (0.5 - y) * l;
  // 1 - y^{1/q}(1-y)^{1/q'} - y^{1/q'}(1-y)^{1/q} written with expm1 so the
  // q -> 1 limit stays accurate.
  const double w = (1.0 - q) / q;
  return (y * std::expm1(-w * l) + (1.0 - y) * std::expm1(w * l)) / (2.0 * w * q);
}

double binary_xi_q(double q, double alpha) {
  if (!(alpha >= 0.0 && alpha <= std::numbers::ln2))
    throw ValidationError("alpha must lie in [0, ln 2] for the two-point chain");
  if (alpha == 0.0) return 0.0;
  if (q == 0.0) {
    const double s = std::sinh(std::sqrt(2.0 * alpha));
    return s * s;
  }
  return binary_xi_of_y(q, binary_y_of_alpha(alpha));
}

}  // namespace rsobolev
