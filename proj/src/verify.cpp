#include "rsobolev/verify.hpp"

#include "rsobolev/concentration.hpp"
#include "rsobolev/entropy.hpp"
#include "rsobolev/graph.hpp"
#include "rsobolev/io.hpp"
#include "rsobolev/semigroup.hpp"
#include "rsobolev/sobolev.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

namespace rsobolev {

namespace {

Semigroup three_state_chain() {
  Eigen::MatrixXd l(3, 3);
  l << -1.0, 0.7, 0.3, 0.7, -1.2, 0.5, 0.3, 0.5, -0.8;
  return validate_semigroup(l);
}

std::vector<double> random_positive(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 2.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

CheckResult worst_error(const std::string& name, double worst, double tolerance) {
  return {name, worst <= tolerance, "max error " + format_double(worst) + " (tol " + format_double(tolerance) + ")"};
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CheckResult> out;
  const Semigroup bin = binary_semigroup();
  const Semigroup tri = three_state_chain();
  auto guard = [&](const std::string& name, const std::function<CheckResult()>& body) {
    try {
      out.push_back(body());
    } catch (const std::exception& e) {
      out.push_back({name, false, std::string("threw: ") + e.what()});
    }
  };

  guard("dirichlet form: carre du champ route equals generator route", [&] {
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      const Semigroup& s = t % 2 ? bin : tri;
      const ProductSpace sp = make_product_space(s.states(), 1 + t % 3);
      auto f = random_positive(sp.size(), rng), g = random_positive(sp.size(), rng);
      worst = std::max(worst, std::abs(dirichlet_form(s, sp, f, g) - dirichlet_form_by_generator(s, sp, f, g)));
    }
    return worst_error("dirichlet form: carre du champ route equals generator route", worst, 1e-10);
  });

  guard("carre du champ is nonnegative and the form symmetric", [&] {
    double worst = 0.0;
    bool nonneg = true;
    for (int t = 0; t < 50; ++t) {
      const ProductSpace sp = make_product_space(3, 2);
      auto f = random_positive(sp.size(), rng), g = random_positive(sp.size(), rng);
      for (double v : carre_du_champ(tri, sp, f, f)) nonneg = nonneg && v >= -1e-15;
      worst = std::max(worst, std::abs(dirichlet_form(tri, sp, f, g) - dirichlet_form(tri, sp, g, f)));
    }
    CheckResult r = worst_error("carre du champ is nonnegative and the form symmetric", worst, 1e-12);
    r.passed = r.passed && nonneg;
    return r;
  });

  guard("heat semigroup property", [&] {
    double worst = 0.0;
    for (double s : {0.1, 0.5, 2.0})
      for (double t : {0.3, 1.0})
        worst = std::max(worst, (heat_operator(tri, s + t) - heat_operator(tri, s) * heat_operator(tri, t))
                                    .cwiseAbs()
                                    .maxCoeff());
    return worst_error("heat semigroup property", worst, 1e-9);
  });

  guard("entropy-rate derivative matches normalized Dirichlet form", [&] {
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
      const ProductSpace sp = make_product_space(2, 1 + t % 3);
      NonnegFunction f(sp, random_positive(sp.size(), rng));
      const DerivativeCheck d = derivative_check(bin, f, 1.5 + 0.5 * (t % 4), 1e-4);
      worst = std::max(worst, std::abs(d.finite_difference - d.analytic));
    }
    return worst_error("entropy-rate derivative matches normalized Dirichlet form", worst, 1e-6);
  });

  guard("two-parameter entropy equals Renyi divergence of the tilted law", [&] {
    double worst = 0.0;
    const std::vector<double> w = product_measure(tri.stationary(), 2);
    for (int t = 0; t < 50; ++t) {
      auto f = random_positive(w.size(), rng);
      const double p = 0.5 * (t % 7), q = 0.5 + 0.5 * (t % 5);
      const Distribution qd = tilted_distribution(f, w, q);
      worst = std::max(worst, std::abs(ent_pq(f, w, p, q) - renyi_divergence(qd, w, p / q)));
    }
    return worst_error("two-parameter entropy equals Renyi divergence of the tilted law", worst, 1e-10);
  });

  guard("two-parameter entropy is monotone in each order", [&] {
    const std::vector<double> w = product_measure(bin.stationary(), 3);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      auto f = random_positive(w.size(), rng);
      const std::vector<double> orders{0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, kInf};
      for (double q : orders)
        for (std::size_t i = 1; i < orders.size(); ++i)
          worst = std::max(worst, ent_pq(f, w, orders[i - 1], q) - ent_pq(f, w, orders[i], q));
    }
    return worst_error("two-parameter entropy is monotone in each order", worst, 1e-12);
  });

  guard("simplex optimizer reproduces the two-point closed form", [&] {
    double worst = 0.0;
    for (double q : {0.8, 2.0})
      for (double a : {0.05, 0.2, 0.4, 0.6}) worst = std::max(worst, std::abs(xi_q(bin, q, a) - binary_xi_q(q, a)));
    return worst_error("simplex optimizer reproduces the two-point closed form", worst, 1e-6);
  });

  guard("two-point log-Sobolev function is convex and increasing", [&] {
    std::vector<double> grid(64);
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = std::numbers::ln2 * static_cast<double>(i) / 64.0;
    double worst = 0.0;
    for (double q : {0.0, 0.5, 1.0, 2.0, 3.0}) {
      SampledCurve c = binary_xi_curve(q, grid);
      const SampledCurve e = conv_envelope(c);
      for (std::size_t i = 0; i < grid.size(); ++i) worst = std::max(worst, std::abs(e.values[i] - c.values[i]));
      for (std::size_t i = 1; i < grid.size(); ++i) worst = std::max(worst, c.values[i - 1] - c.values[i]);
    }
    return worst_error("two-point log-Sobolev function is convex and increasing", worst, 1e-12);
  });

  guard("q-radius symmetry under Holder conjugation", [&] {
    Graph g = random_regular_graph(10, 3, rng);
    const SparseMatrix a = g.adjacency();
    const double r1 = q_radius(a, 3.0).value, r2 = q_radius(a, 1.5).value;
    return worst_error("q-radius symmetry under Holder conjugation", std::abs(r1 - r2), 1e-6);
  });

  guard("Faber-Krahn on the 3-cube with four vertices", [&] {
    const FaberKrahnResult r = faber_krahn_exact(Graph::complete(2), 3, 2.0, 4);
    return worst_error("Faber-Krahn on the 3-cube with four vertices", std::abs(r.value - 2.0), 1e-9);
  });

  guard("Faber-Krahn maxima respect the two-point bound", [&] {
    double worst = -kInf;
    for (int n = 1; n <= 4; ++n)
      for (int m = 1; m <= (1 << n); ++m)
        worst = std::max(worst, faber_krahn_exact(Graph::complete(2), n, 2.0, m).value -
                                    binary_faber_krahn_bound(2.0, n, m));
    return CheckResult{"Faber-Krahn maxima respect the two-point bound", worst <= 1e-9,
                       "max excess " + format_double(worst)};
  });

  guard("Gaussian bound equals the optimized Herbst exponent", [&] {
    double worst = 0.0;
    const PhiFamily gauss = gaussian_family();
    for (double p : {0.0, 0.5, 1.0})
      for (double r : {0.1, 0.8, 2.0}) {
        const double n = 1.0;
        const LogBound b = concentration_bound(1, p, gaussian_optimal_q(p, r), r, gauss,
                                               [n](double) { return 1.0 / n; });
        worst = std::max(worst, std::abs(b.log_value - std::log(gaussian_bound(p, r))));
      }
    return worst_error("Gaussian bound equals the optimized Herbst exponent", worst, 1e-12);
  });

  guard("inverse log-Sobolev function below the linear bound; beta <= 2", [&] {
    double worst = -kInf;
    for (int i = 0; i <= 19; ++i) {
      const double s = 0.1 + 0.1 * i;
      for (int j = 0; j <= 10; ++j) {
        const double t = 0.05 * j;
        worst = std::max(worst, xi_inverse(s, t).alpha - 0.5 * s * s * t);
      }
    }
    for (int i = 0; i <= 200; ++i) worst = std::max(worst, beta_binary(0.01 * i) - 2.0);
    return CheckResult{"inverse log-Sobolev function below the linear bound; beta <= 2", worst <= 1e-12,
                       "max excess " + format_double(worst)};
  });

  return out;
}

}  // namespace rsobolev
