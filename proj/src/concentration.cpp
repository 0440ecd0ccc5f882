#include "rsobolev/concentration.hpp"

#include "rsobolev/errors.hpp"

#include <cmath>
#include <numbers>

namespace rsobolev {

namespace {

constexpr double kLn2 = std::numbers::ln2;

struct SimpsonState {
  const std::function<double(double)>& f;
  double error = 0.0;
  bool failed = false;
};

double simpson_step(SimpsonState& st, double a, double b, double fa, double fm, double fb, double whole,
                    double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = st.f(lm), frm = st.f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * eps || depth <= 0) {
    if (depth <= 0 && std::abs(delta) > 15.0 * eps) st.failed = true;
    st.error += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return simpson_step(st, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         simpson_step(st, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

// phi_s(beta(s)) / s^2 with the analytic value at s = 0.
std::function<double(double)> integrand(const PhiFamily& family, const BetaFunction& beta) {
  return [&family, &beta](double s) {
    if (s == 0.0) return family.phi_over_s2_at_zero(beta(0.0));
    return family.phi(s, beta(s)) / (s * s);
  };
}

void check_orders(double p, double q) {
  if (std::isnan(p) || std::isnan(q) || p < 0.0 || q < p || std::isinf(q))
    throw ValidationError("need 0 <= p <= q < inf");
}

}  // namespace

PhiFamily gaussian_family() {
  return {"gaussian", [](double s, double t) { return 0.5 * s * s * t; }, [](double t) { return 0.5 * t; }};
}

PhiFamily binary_family() {
  return {"binary", [](double s, double t) { return xi_inverse(s, t).alpha; },
          [](double t) {
            // Xi_s(s^2 a) tends to sinh^2(sqrt(2a)) as s -> 0.
            if (t <= 0.0) return 0.0;
            const double u = std::asinh(std::sqrt(t));
            return 0.5 * u * u;
          }};
}

Quadrature adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tolerance,
                            int max_depth) {
  if (a == b) return {0.0, 0.0};
  SimpsonState st{f};
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double v = simpson_step(st, a, b, fa, fm, fb, whole, tolerance, max_depth);
  if (st.failed || !std::isfinite(v)) throw NumericalError("adaptive quadrature did not converge");
  return {v, st.error};
}

double beta_binary(double s) {
  if (!(s >= 0.0 && s <= 2.0)) throw ValidationError("beta is defined on [0, 2]");
  const double u = s - 1.0;
  const double ratio = u == 0.0 ? 1.0 : std::expm1(u) / u;
  return 0.5 * (std::numbers::e - 1.0) * ratio;
}

XiInverse xi_inverse(double q, double t) {
  if (std::isnan(t) || t < 0.0) throw ValidationError("t must be nonnegative");
  if (!(q >= 0.0) || std::isinf(q)) throw ValidationError("q must be finite and nonnegative");
  if (t == 0.0) return {0.0, false};
  if (q == 0.0) {
    const double u = std::asinh(std::sqrt(t));
    const double a = 0.5 * u * u;
    return a >= kLn2 ? XiInverse{kLn2, a > kLn2} : XiInverse{a, false};
  }
  if (q > 1.0 && t >= 0.5 / (q - 1.0)) return {kLn2, t > 0.5 / (q - 1.0)};
  double lo = 0.0, hi = 0.5;  // Xi decreases in y
  for (int it = 0; it < 4000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (binary_xi_of_y(q, mid) > t)
      lo = mid;
    else
      hi = mid;
  }
  return {binary_divergence(hi), false};
}

XiInverse xi_inverse(const SampledCurve& curve, double t) {
  if (std::isnan(t) || t < 0.0) throw ValidationError("t must be nonnegative");
  const SampledCurve env = conv_envelope(curve);
  const auto& x = env.grid;
  const auto& y = env.values;
  if (t >= y.back()) return {x.back(), t > y.back()};
  if (t <= y.front()) return {x.front(), false};
  // The envelope is nondecreasing past its minimum; take the largest alpha with value <= t.
  for (std::size_t j = x.size() - 1; j > 0; --j) {
    if (y[j - 1] <= t) {
      if (y[j] == y[j - 1]) return {x[j], false};
      const double s = (t - y[j - 1]) / (y[j] - y[j - 1]);
      return {x[j - 1] + s * (x[j] - x[j - 1]), false};
    }
  }
  return {x.front(), false};
}

Quadrature upsilon_bound(double p, double q, const BetaFunction& beta, const PhiFamily& family) {
  check_orders(p, q);
  if (!(p > 0.0) || !(q > p)) throw ValidationError("upsilon bound needs 0 < p < q");
  Quadrature integral = adaptive_simpson(integrand(family, beta), p, q);
  const double scale = q * p / (q - p);
  return {scale * integral.value, scale * integral.error};
}

LogBound concentration_bound(int n, double p, double q, double r, const PhiFamily& family,
                             const BetaFunction& beta) {
  check_orders(p, q);
  if (n < 1) throw ValidationError("n must be positive");
  const Quadrature integral = adaptive_simpson(integrand(family, beta), p, q);
  const double lv = n * q * integral.value - r * q;
  return {lv, std::exp(lv), integral.error};
}

double gaussian_optimal_q(double p, double r) {
  if (std::isnan(p) || p < 0.0) throw ValidationError("p must be nonnegative");
  return r >= 0.5 * p ? 0.5 * p + r : p;
}

double gaussian_bound(double p, double r) {
  if (std::isnan(p) || p < 0.0) throw ValidationError("p must be nonnegative");
  if (r >= 0.5 * p) {
    const double u = r + 0.5 * p;
    return std::exp(-0.5 * u * u);
  }
  return std::exp(-p * r);
}

double hypercube_baseline(int n, double p, double r) {
  if (n < 1) throw ValidationError("n must be positive");
  // inf over q in [p, 2] of n q (q - p) - r q.
  double q = std::clamp(0.5 * p + r / (2.0 * n), p, 2.0);
  return std::exp(n * q * (q - p) - r * q);
}

BoundReport hypercube_bound(int n, double p, double r) {
  if (n < 1) throw ValidationError("n must be positive");
  if (!(p >= 0.0 && p <= 2.0)) throw ValidationError("p must lie in [0, 2]");
  if (std::isnan(r)) throw ValidationError("r must be a number");
  static const PhiFamily family = binary_family();
  static const BetaFunction beta = beta_binary;
  auto value = [&](double q, double* err) {
    const LogBound b = concentration_bound(n, p, q, r, family, beta);
    if (err) *err = b.quadrature_error;
    return b.log_value;
  };

  constexpr int kGrid = 64;
  double best_q = p, best = value(p, nullptr);
  int best_j = 0;
  std::vector<double> qs(kGrid);
  for (int j = 0; j < kGrid; ++j) {
    qs[static_cast<std::size_t>(j)] = p + (2.0 - p) * j / (kGrid - 1);
    const double v = value(qs[static_cast<std::size_t>(j)], nullptr);
    if (v < best) {
      best = v;
      best_q = qs[static_cast<std::size_t>(j)];
      best_j = j;
    }
  }
  // Golden-section refinement inside the bracketing grid cells.
  double a = qs[static_cast<std::size_t>(std::max(0, best_j - 1))];
  double b = qs[static_cast<std::size_t>(std::min(kGrid - 1, best_j + 1))];
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = value(c, nullptr), fd = value(d, nullptr);
  while (b - a > 1e-8) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = value(c, nullptr);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = value(d, nullptr);
    }
  }
  const double qm = 0.5 * (a + b);
  const double vm = value(qm, nullptr);
  if (vm < best) {
    best = vm;
    best_q = qm;
  }
  double err = 0.0;
  best = value(best_q, &err);

  BoundReport rep{};
  rep.n = n;
  rep.p = p;
  rep.r = r;
  rep.q_star = best_q;
  rep.log_bound = best;
  rep.bound = std::exp(best);
  rep.baseline = hypercube_baseline(n, p, r);
  rep.baseline_p0 = std::exp(-r * r / (4.0 * n));
  rep.quadrature_error = err;
  return rep;
}

}  // namespace rsobolev
