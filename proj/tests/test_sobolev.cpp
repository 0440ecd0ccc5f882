#include "oracles.hpp"

#include "rsobolev/errors.hpp"
#include "rsobolev/sobolev.hpp"

#include <doctest.h>

#include <numbers>

using namespace rsobolev;

namespace {

const double kLn2 = std::numbers::ln2;

Semigroup three_state() {
  Eigen::MatrixXd l(3, 3);
  l << -1.5, 1.0, 0.5, 1.0, -1.2, 0.2, 0.5, 0.2, -0.7;
  return validate_semigroup(l);
}

// (1/(q-1)) E(f, f^{q-1}) with f = (Q/pi)^{1/q}, from the pairwise Gamma sum.
double objective_direct(const Eigen::MatrixXd& l, const std::vector<double>& pi, const std::vector<double>& qd,
                        double q) {
  std::vector<double> f(qd.size()), g(qd.size());
  for (std::size_t i = 0; i < qd.size(); ++i) {
    f[i] = std::pow(qd[i] / pi[i], 1.0 / q);
    g[i] = std::pow(f[i], q - 1.0);
  }
  return oracle::mean(oracle::gamma_pointwise(l, f, g), pi) / (q - 1.0);
}

double kl(const std::vector<double>& qd, const std::vector<double>& pi) {
  double s = 0.0;
  for (std::size_t i = 0; i < qd.size(); ++i)
    if (qd[i] > 0.0) s += qd[i] * std::log(qd[i] / pi[i]);
  return s;
}

// Exhaustive scan of the 3-simplex: a step-1e-3 grid of feasible points plus a
// fine sweep of directions from pi, bisected to the constraint boundary.
double brute_force_xi(const Semigroup& s, double q, double alpha) {
  const Eigen::MatrixXd& l = s.generator();
  const std::vector<double> pi(s.stationary().data(), s.stationary().data() + 3);
  double best = std::numeric_limits<double>::infinity();
  const int steps = 1000;
  for (int i = 1; i < steps; ++i)
    for (int j = 1; i + j < steps; ++j) {
      const std::vector<double> qd{i / double(steps), j / double(steps), (steps - i - j) / double(steps)};
      if (kl(qd, pi) >= alpha) best = std::min(best, objective_direct(l, pi, qd, q));
    }
  const int dirs = 20000;
  for (int k = 0; k < dirs; ++k) {
    const double th = 2.0 * std::numbers::pi * k / dirs;
    // Orthonormal basis of the plane sum(Q) = 1.
    const double c = std::cos(th) / std::sqrt(2.0), d = std::sin(th) / std::sqrt(6.0);
    const std::vector<double> dir{c + d, -c + d, -2.0 * d};
    double tmax = 1e300;
    for (int a = 0; a < 3; ++a)
      if (dir[a] < 0) tmax = std::min(tmax, -pi[a] / dir[a]);
    auto at = [&](double t) { return std::vector<double>{pi[0] + t * dir[0], pi[1] + t * dir[1], pi[2] + t * dir[2]}; };
    if (kl(at(tmax * (1 - 1e-12)), pi) < alpha) continue;
    double lo = 0.0, hi = tmax * (1 - 1e-12);
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      (kl(at(mid), pi) < alpha ? lo : hi) = mid;
    }
    best = std::min(best, objective_direct(l, pi, at(hi), q));
  }
  return best;
}

}  // namespace

TEST_CASE("two-point closed form reproduces the printed expression") {
  for (double q : {0.0, 0.8, 1.0, 1.5, 2.0, 3.0}) {
    CHECK(binary_xi_q(q, 0.0) == doctest::Approx(0.0));
    for (int i = 1; i < 40; ++i) {
      const double a = kLn2 * i / 40.0;
      CHECK(binary_xi_q(q, a) == doctest::Approx(oracle::binary_xi(q, a)).epsilon(1e-9));
    }
  }
  CHECK(binary_xi_q(2.0, kLn2) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(binary_xi_q(1.0, kLn2 - oracle::h(0.25)) == doctest::Approx(std::log(3.0) / 4.0).epsilon(1e-10));
  CHECK_THROWS_AS(binary_xi_q(2.0, 0.8), ValidationError);
  CHECK_THROWS_AS(binary_xi_q(2.0, -0.1), ValidationError);
}

TEST_CASE("two-point divergence and its inverse") {
  for (double y : {1e-9, 1e-4, 0.1, 0.3, 0.49, 0.4999999}) {
    CHECK(binary_divergence(y) == doctest::Approx(kLn2 - oracle::h(y)).epsilon(1e-12));
    CHECK(binary_y_of_alpha(binary_divergence(y)) == doctest::Approx(y).epsilon(1e-9));
  }
  CHECK(binary_divergence(0.0) == doctest::Approx(kLn2));
  CHECK(binary_y_of_alpha(0.0) == doctest::Approx(0.5));
}

TEST_CASE("two-point closed form is nonnegative, nondecreasing and convex") {
  for (double q : {0.0, 0.8, 1.0, 2.0, 3.0}) {
    const SampledCurve c = binary_xi_curve(q, alpha_grid(binary_semigroup(), 128));
    for (std::size_t i = 0; i < c.values.size(); ++i) {
      CHECK(c.values[i] >= 0.0);
      if (i > 0) CHECK(c.values[i] >= c.values[i - 1]);
      if (i > 0 && i + 1 < c.values.size())
        CHECK(c.values[i + 1] - 2 * c.values[i] + c.values[i - 1] >= -1e-12);
    }
  }
}

TEST_CASE("simplex optimizer matches the closed form on the two-point chain") {
  const Semigroup s = binary_semigroup();
  for (double q : {0.0, 0.8, 1.0, 2.0, 3.0})
    for (double a : {0.0, 0.05, 0.3, 0.6}) CHECK(std::abs(xi_q(s, q, a) - binary_xi_q(q, a)) < 1e-6);
}

TEST_CASE("three-state optimizer agrees with an exhaustive scan") {
  const Semigroup s = three_state();
  const double ref = brute_force_xi(s, 2.0, 0.2);
  const XiSolution sol = xi_q_solve(s, 2.0, 0.2);
  CHECK(std::abs(sol.value - ref) < 1e-4);
  // The returned argmin is feasible and evaluates to the returned value.
  const std::vector<double> pi(s.stationary().data(), s.stationary().data() + 3);
  CHECK(kl(sol.argmin, pi) >= 0.2 - 1e-12);
  CHECK(objective_direct(s.generator(), pi, sol.argmin, 2.0) == doctest::Approx(sol.value).epsilon(1e-9));
}

TEST_CASE("optimizer never exceeds an explicit feasible point") {
  const Semigroup s = three_state();
  const std::vector<double> pi(s.stationary().data(), s.stationary().data() + 3);
  const std::vector<double> qd{0.7, 0.2, 0.1};
  const double a = kl(qd, pi);
  CHECK(xi_q(s, 1.5, a) <= objective_direct(s.generator(), pi, qd, 1.5) + 1e-12);
}

TEST_CASE("alpha grid and validation of the log-Sobolev solver") {
  const Semigroup s = binary_semigroup();
  const std::vector<double> g = alpha_grid(s, 64);
  CHECK(g.size() == 64);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == doctest::Approx(kLn2 - 1e-6).epsilon(1e-15));
  CHECK(xi_q(s, 2.0, 0.0) == 0.0);
  CHECK_THROWS_AS(xi_q(s, 2.0, kLn2 + 0.01), ValidationError);
  const Eigen::MatrixXd big = Eigen::MatrixXd::Ones(5, 5) - 5.0 * Eigen::MatrixXd::Identity(5, 5);
  CHECK_THROWS_AS(xi_q(validate_semigroup(big), 2.0, 0.1), ValidationError);
}

TEST_CASE("lower convex envelope") {
  SampledCurve convex{{0, 1, 2, 3, 4}, {0, 1, 4, 9, 16}, CurveKind::xi_q, 2, 2, 1};
  const SampledCurve same = conv_envelope(convex);
  for (std::size_t i = 0; i < 5; ++i) CHECK(same.values[i] == doctest::Approx(convex.values[i]).epsilon(1e-12));
  CHECK(same.kind == CurveKind::conv_xi_q);

  std::vector<double> x, y;
  for (int i = 0; i <= 40; ++i) {
    const double t = i / 40.0;
    x.push_back(t);
    y.push_back(t * t + 0.3 * std::exp(-200 * (t - 0.5) * (t - 0.5)) - 0.05 * std::sin(9 * t));
  }
  const SampledCurve bumpy{x, y, CurveKind::xi_q, 2, 2, 1};
  const SampledCurve env = conv_envelope(bumpy);
  const std::vector<double> ref = oracle::chord_envelope(x, y);
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(env.values[i] == doctest::Approx(ref[i]).epsilon(1e-12));
    CHECK(env.values[i] <= y[i] + 1e-15);
  }
  const SampledCurve twice = conv_envelope(env);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(twice.values[i] == doctest::Approx(env.values[i]).epsilon(1e-14));
  CHECK_NOTHROW(env.validate());

  const SampledCurve binary = binary_xi_curve(2.0, alpha_grid(binary_semigroup()));
  const SampledCurve benv = conv_envelope(binary);
  for (std::size_t i = 0; i < binary.values.size(); ++i)
    CHECK(benv.values[i] == doctest::Approx(binary.values[i]).epsilon(1e-12));

  SampledCurve bad{{0, 0}, {1, 1}, CurveKind::xi_q, 2, 2, 1};
  CHECK_THROWS_AS(conv_envelope(bad), ValidationError);
}

TEST_CASE("transition function") {
  const SampledCurve env = conv_envelope(binary_xi_curve(2.0, alpha_grid(binary_semigroup(), 256)));
  CHECK(phi_pq(3.0, 2.0, env, 0.3) == 0.0);
  CHECK(phi_pq(2.0, 2.0, env, 0.3) == doctest::Approx(env.at(0.3)));
  CHECK(phi_pq(0.0, 2.0, env, 0.2) == doctest::Approx(binary_xi_q(2.0, 0.2)).epsilon(1e-3));
  CHECK_THROWS_AS(phi_pq(0.0, 2.0, env, 0.9), ValidationError);
}

TEST_CASE("log-Sobolev constant of a sampled curve") {
  const SampledCurve c = binary_xi_curve(2.0, alpha_grid(binary_semigroup(), 512));
  const double base = lsi_constant(c, 2.0);
  SampledCurve scaled = c;
  for (auto& v : scaled.values) v *= 3.0;
  CHECK(lsi_constant(scaled, 2.0) == doctest::Approx(base / 3.0).epsilon(1e-12));
  // Near alpha = 0: alpha ~ 2 d^2 and Xi_2 ~ d^2 with y = 1/2 - d, so the
  // supremum of alpha / (4 Xi_2) approaches 1/2.
  CHECK(base == doctest::Approx(0.5).epsilon(0.02));
  SampledCurve zero = c;
  zero.values[3] = 0.0;
  CHECK(lsi_constant(zero, 2.0) == kInf);
}

TEST_CASE("Renyi-Sobolev function on the two-fold product") {
  const Semigroup s = binary_semigroup();
  SolverConfig cfg;
  cfg.max_grid_points = 20000;
  CHECK(xi_pq_n(s, 2.0, 2.0, 2, 0.0, cfg) == 0.0);
  const double same = xi_pq_n(s, 2.0, 2.0, 2, 0.2, cfg);
  const double zero_order = xi_pq_n(s, 0.0, 2.0, 2, 0.2, cfg);
  // The constraint loosens as p grows, so the value can only drop.
  CHECK(zero_order >= same - 1e-6);
  // Support of two adjacent points: E = 1/4, E f^2 = 1/2, scaled by 1/((q-1) n).
  CHECK(zero_order == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(same <= binary_xi_q(2.0, 0.2) + 1e-4);
  CHECK(same >= binary_xi_q(2.0, 0.2) - 1e-4);  // convex, so the envelope is the curve itself
  CHECK(zero_order >= -1e-12);
  // Above the diagonal the transition function is zero.
  CHECK(xi_pq_n(s, 3.0, 2.0, 2, 0.2, cfg) >= -1e-4);
  CHECK_THROWS_AS(xi_pq_n(s, 2.0, 2.0, 7, 0.2, cfg), ValidationError);
}

TEST_CASE("typical sets and extremal constructions") {
  const std::vector<double> q{0.75, 0.25};
  for (int ones = 0; ones <= 8; ++ones) {
    const std::vector<int> c{8 - ones, ones};
    CHECK(is_typical(c, 8, q, 0.5) == (ones >= 1 && ones <= 3));
  }

  const Semigroup s = binary_semigroup();
  ExtremalSpec spec;
  spec.first = q;
  spec.second = q;
  spec.lambda = 1.0;
  spec.epsilon = 0.5;
  spec.n = 8;
  const NonnegFunction f = build_extremal(spec, s);
  double mass = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const int ones = __builtin_popcountll(i);
    CHECK((f[i] > 0.0) == (ones >= 1 && ones <= 3));
    mass += f[i] / 256.0;
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));

  ExtremalSpec flat;
  flat.first = {0.5, 0.5};
  flat.second = {0.5, 0.5};
  flat.epsilon = 5.0;
  flat.n = 5;
  const NonnegFunction one = build_extremal(flat, s);
  for (std::size_t i = 0; i < one.size(); ++i) CHECK(one[i] == doctest::Approx(1.0));
  const ExtremalReport r = extremal_report(flat, s, 0.0, 2.0);
  CHECK(r.ent_rate == doctest::Approx(0.0));
  CHECK(r.dirichlet_rate == doctest::Approx(0.0));

  ExtremalSpec dm;
  dm.variant = ExtremalVariant::dirac_mixture;
  dm.beta = 0.1;
  dm.epsilon = 0.2;
  dm.n = 6;
  const NonnegFunction g = build_extremal(dm, s);
  CHECK(dirac_atom(s) == 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const int ones = __builtin_popcountll(i);
    const bool typical = std::abs(ones / 6.0 - 0.5) <= 0.1 + 1e-12;
    CHECK((g[i] > 0.0) == (typical || i == 0));
  }

  spec.epsilon = 0.01;
  spec.n = 7;
  CHECK_THROWS_AS(build_extremal(spec, s), ValidationError);
}

TEST_CASE("Dirac mixture pushes the Dirichlet rate down while the entropy rate stays large") {
  const Semigroup s = binary_semigroup();
  ExtremalSpec dm;
  dm.variant = ExtremalVariant::dirac_mixture;
  dm.beta = 0.05;
  dm.epsilon = 0.5;
  double last = kInf;
  for (int n : {8, 12, 16}) {
    dm.n = n;
    const ExtremalReport r = extremal_report(dm, s, 2.0, 1.5);
    CHECK(r.dirichlet_rate < last);
    last = r.dirichlet_rate;
    CHECK(r.ent_rate > 0.45);
  }
}

TEST_CASE("simplex search utilities") {
  CHECK(simplex_grid_size(3, 4) == 15);
  CHECK(simplex_grid_size(2, 400) == 401);
  const NelderMeadResult r = nelder_mead(
      [](std::span<const double> x) { return (x[0] - 1) * (x[0] - 1) + 10 * (x[1] + 2) * (x[1] + 2); }, {0.0, 0.0},
      0.5, 4000);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.x[1] == doctest::Approx(-2.0).epsilon(1e-6));
}
