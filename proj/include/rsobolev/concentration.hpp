#pragma once

#include "rsobolev/sobolev.hpp"

#include <functional>
#include <string>

namespace rsobolev {

// phi_s(t) together with the s -> 0 limit of phi_s(t) / s^2, which fills the
// integrand at the left end when p = 0.
struct PhiFamily {
  std::string name;
  std::function<double(double s, double t)> phi;
  std::function<double(double t)> phi_over_s2_at_zero;
};

PhiFamily gaussian_family();
// phi_s = inverse of the two-point closed form Xi_s.
PhiFamily binary_family();

using BetaFunction = std::function<double(double)>;

struct Quadrature {
  double value;
  double error;  // accumulated |S2 - S1| / 15
};

Quadrature adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                            double tolerance = 1e-8, int max_depth = 40);

// (e - 1)(e^{s-1} - 1) / (2 (s - 1)), continuous at s = 1.
double beta_binary(double s);

struct XiInverse {
  double alpha;
  bool saturated;  // t beyond the attainable range; alpha is the right endpoint
};

// alpha with Xi_q(alpha) = t for the two-point chain.
XiInverse xi_inverse(double q, double t);
// Inverse of the lower envelope of a sampled curve.
XiInverse xi_inverse(const SampledCurve& curve, double t);

// (qp/(q-p)) int_p^q phi_s(beta(s)) s^{-2} ds, for 0 < p < q.
Quadrature upsilon_bound(double p, double q, const BetaFunction& beta, const PhiFamily& family);

struct LogBound {
  double log_value;
  double value;
  double quadrature_error;
};

// exp{n q int_p^q phi_s(beta(s)) s^{-2} ds - r q}, evaluated in log space.
LogBound concentration_bound(int n, double p, double q, double r, const PhiFamily& family,
                             const BetaFunction& beta);

double gaussian_bound(double p, double r);
double gaussian_optimal_q(double p, double r);

struct BoundReport {
  int n;
  double p;
  double r;
  double q_star;
  double log_bound;
  double bound;
  double baseline;        // simplified bound with the standard constant
  double baseline_p0;     // e^{-r^2/(4n)}
  double quadrature_error;
};

// Herbst-type bound on the hypercube, minimized over q in [p, 2].
BoundReport hypercube_bound(int n, double p, double r);

// exp(-n (r/(2n) + p/2)^2) if r >= n p, else exp(-p r).
double hypercube_baseline(int n, double p, double r);

}  // namespace rsobolev
