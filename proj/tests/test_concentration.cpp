#include "oracles.hpp"

#include "rsobolev/concentration.hpp"
#include "rsobolev/errors.hpp"

#include <doctest.h>

#include <numbers>

using namespace rsobolev;

TEST_CASE("adaptive Simpson against fixed-panel Simpson") {
  auto f = [](double s) { return std::exp(-s) * std::sin(3 * s) + s * s; };
  const Quadrature q = adaptive_simpson(f, 0.0, 2.0);
  CHECK(q.value == doctest::Approx(oracle::simpson(f, 0.0, 2.0)).epsilon(1e-9));
  CHECK(q.error < 1e-7);
  CHECK(adaptive_simpson(f, 1.0, 1.0).value == 0.0);
  CHECK_THROWS_AS(adaptive_simpson([](double s) { return 1.0 / s; }, 0.0, 1.0), NumericalError);
}

TEST_CASE("beta function of the hypercube") {
  const double e = std::numbers::e;
  CHECK(beta_binary(1.0) == doctest::Approx(0.5 * (e - 1.0)).epsilon(1e-15));
  CHECK(beta_binary(0.0) == doctest::Approx(0.5 * (e - 1.0) * (std::exp(-1.0) - 1.0) / -1.0).epsilon(1e-15));
  CHECK(beta_binary(1.0 - 1e-12) == doctest::Approx(beta_binary(1.0 + 1e-12)).epsilon(1e-10));
  CHECK(beta_binary(2.0) == doctest::Approx(0.5 * (e - 1.0) * (e - 1.0)).epsilon(1e-15));
  for (int i = 0; i <= 200; ++i) CHECK(beta_binary(2.0 * i / 200.0) <= 2.0);
  CHECK_THROWS_AS(beta_binary(2.5), ValidationError);
}

TEST_CASE("two-point inverse inverts the closed form") {
  for (double q : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    for (double a : {0.01, 0.1, 0.3, 0.6}) {
      const XiInverse inv = xi_inverse(q, binary_xi_q(q, a));
      CHECK_FALSE(inv.saturated);
      CHECK(inv.alpha == doctest::Approx(a).epsilon(1e-8));
    }
  }
  const XiInverse sat = xi_inverse(2.0, 0.7);
  CHECK(sat.saturated);
  CHECK(sat.alpha == doctest::Approx(std::numbers::ln2));
  CHECK(xi_inverse(2.0, 0.0).alpha == 0.0);
}

TEST_CASE("sampled-curve inverse follows the envelope") {
  SampledCurve c{{0.0, 0.2, 0.4, 0.6}, {0.0, 0.1, 0.3, 0.6}, CurveKind::xi_q, 2, 2, 1};
  CHECK(xi_inverse(c, 0.05).alpha == doctest::Approx(0.1));
  CHECK(xi_inverse(c, 0.2).alpha == doctest::Approx(0.3));
  CHECK(xi_inverse(c, 1.0).saturated);
}

TEST_CASE("inverse log-Sobolev function sits below the linear bound") {
  for (int i = 0; i <= 19; ++i) {
    const double s = 0.1 + 1.9 * i / 19.0;
    for (int j = 0; j <= 20; ++j) {
      const double t = 0.5 * j / 20.0;
      CHECK(xi_inverse(s, t).alpha <= s * s * t / 2.0 + 1e-12);
    }
  }
}

TEST_CASE("Gaussian family reproduces the optimized Herbst exponent") {
  const PhiFamily g = gaussian_family();
  const BetaFunction one = [](double) { return 1.0; };
  for (double p : {0.0, 0.5, 1.0, 2.0})
    for (double r : {0.1, 0.4, 1.5, 3.0}) {
      const double q = gaussian_optimal_q(p, r);
      const LogBound b = concentration_bound(1, p, q, r, g, one);
      CHECK(b.value == doctest::Approx(gaussian_bound(p, r)).epsilon(1e-12));
      // The closed form integral: q int_p^q (1/2) ds - r q = q (q - p)/2 - r q.
      CHECK(b.log_value == doctest::Approx(q * (q - p) / 2.0 - r * q).epsilon(1e-12));
    }
  CHECK(gaussian_bound(0.0, 1.5) == doctest::Approx(std::exp(-1.125)).epsilon(1e-15));
  // Continuity at the breakpoint r = p/2.
  CHECK(gaussian_bound(2.0, 1.0 - 1e-13) == doctest::Approx(gaussian_bound(2.0, 1.0)).epsilon(1e-12));
}

TEST_CASE("Upsilon bound against a fixed-panel oracle") {
  const PhiFamily b = binary_family();
  const BetaFunction beta = beta_binary;
  const Quadrature u = upsilon_bound(0.5, 1.5, beta, b);
  const double ref = 1.5 * 0.5 / 1.0 * oracle::simpson([&](double s) { return b.phi(s, beta(s)) / (s * s); }, 0.5, 1.5);
  CHECK(u.value == doctest::Approx(ref).epsilon(1e-8));
  CHECK_THROWS_AS(upsilon_bound(0.0, 1.0, beta, b), ValidationError);
}

TEST_CASE("hypercube bound beats the simplified baselines") {
  for (int n : {5, 10, 20})
    for (double r : {0.5, 1.0, 2.0, n / 2.0}) {
      const BoundReport rep = hypercube_bound(n, 0.0, r);
      CHECK(rep.bound <= rep.baseline_p0 - 1e-6);
      CHECK(rep.q_star >= 0.0);
      CHECK(rep.q_star <= 2.0);
      CHECK(rep.bound == doctest::Approx(std::exp(rep.log_bound)));
    }
  for (double p : {0.3, 1.0})
    for (int n : {5, 10}) {
      const BoundReport rep = hypercube_bound(n, p, 2.0);
      CHECK(rep.bound <= rep.baseline * (1 + 1e-12));
    }
  // Log-space evaluation copes with exponents of size 1e5.
  const BoundReport big = hypercube_bound(100000, 0.0, 100000.0);
  CHECK(std::isfinite(big.log_bound));
  CHECK(big.log_bound < -1000.0);
  CHECK_THROWS_AS(hypercube_bound(0, 0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(hypercube_bound(5, 2.5, 1.0), ValidationError);
}
