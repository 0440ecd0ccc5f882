#include "rsobolev/sobolev.hpp"

#include "rsobolev/errors.hpp"
#include "rsobolev/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace rsobolev {

namespace {

constexpr std::size_t kMaxSimplexAtoms = 64;

// Dense generator of the product chain, built column by column.
Eigen::MatrixXd product_generator(const Semigroup& s, const ProductSpace& space) {
  const std::size_t n = space.size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<double> e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    const std::vector<double> col = apply_generator(s, space, e);
    for (std::size_t i = 0; i < n; ++i)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
    e[j] = 0.0;
  }
  return m;
}

// -sum_{x,y} w_x L_{xy} a_y b_x
double form(const Eigen::MatrixXd& l, const std::vector<double>& w, const std::vector<double>& a,
            const std::vector<double>& b) {
  const std::size_t n = w.size();
  double acc = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    if (b[x] == 0.0) continue;
    double row = 0.0;
    for (std::size_t y = 0; y < n; ++y)
      row += l(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) * a[y];
    acc += w[x] * row * b[x];
  }
  return -acc;
}

double pow0(double x, double e) { return x == 0.0 ? (e == 0.0 ? 1.0 : 0.0) : std::pow(x, e); }

// Builds the Q-space problem shared by the one- and n-dimensional solvers.
SimplexProblem make_problem(const Eigen::MatrixXd& l, const std::vector<double>& w, double p,
                            double q, int n, double alpha) {
  SimplexProblem pr;
  pr.atoms = w.size();
  pr.center = w;
  pr.level = n * alpha;
  const double inv_n = 1.0 / n;
  auto ratio = [w](std::span<const double> qv) {
    std::vector<double> r(qv.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = qv[i] / w[i];
    return r;
  };

  if (q == 0.0) {
    // Scale-free objective -E(f, 1/f) under (1/2) Var(ln f) >= alpha.
    pr.interior_only = true;
    pr.objective = [=](std::span<const double> qv) {
      std::vector<double> f = ratio(qv), g(f.size());
      for (std::size_t i = 0; i < f.size(); ++i) g[i] = 1.0 / f[i];
      return -form(l, w, f, g) * inv_n;
    };
    pr.constraint = [w](std::span<const double> qv) {
      double m1 = 0.0, m2 = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (qv[i] <= 0.0) return kInf;
        const double v = std::log(qv[i] / w[i]);
        m1 += w[i] * v;
        m2 += w[i] * v * v;
      }
      return 0.5 * std::max(0.0, m2 - m1 * m1);
    };
    return pr;
  }

  if (q == 1.0) {
    pr.interior_only = true;
    pr.objective = [=](std::span<const double> qv) {
      std::vector<double> f = ratio(qv), g(f.size());
      for (std::size_t i = 0; i < f.size(); ++i) g[i] = std::log(f[i]);
      return form(l, w, f, g) * inv_n;
    };
  } else {
    pr.interior_only = q < 1.0;
    const double a_exp = 1.0 / q, b_exp = 1.0 - 1.0 / q;
    pr.objective = [=](std::span<const double> qv) {
      std::vector<double> r = ratio(qv), a(r.size()), b(r.size());
      for (std::size_t i = 0; i < r.size(); ++i) {
        a[i] = pow0(r[i], a_exp);
        b[i] = pow0(r[i], b_exp);
      }
      return form(l, w, a, b) / ((q - 1.0) * n);
    };
  }
  const double gamma = std::isinf(p) ? kInf : p / q;
  pr.constraint = [w, gamma](std::span<const double> qv) { return renyi_divergence(qv, w, gamma); };
  return pr;
}

SimplexSearchConfig search_config(const SolverConfig& cfg) {
  SimplexSearchConfig sc;
  sc.grid_divisions = cfg.grid_divisions;
  sc.max_grid_points = cfg.max_grid_points;
  sc.polish_starts = cfg.polish_starts;
  sc.polish_iterations = cfg.polish_iterations;
  sc.random_starts = cfg.random_starts;
  sc.seed = cfg.seed;
  return sc;
}

void check_alpha(const Semigroup& s, double alpha) {
  const double top = -std::log(s.min_stationary());
  if (!(alpha >= 0.0 && alpha < top))
    throw ValidationError("alpha must lie in [0, -ln min pi)");
}

}  // namespace

std::string to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::xi_q: return "xi_q";
    case CurveKind::conv_xi_q: return "conv_xi_q";
    case CurveKind::xi_pq_n: return "xi_pq_n";
    case CurveKind::inverse: return "inverse";
  }
  return "unknown";
}

void SampledCurve::validate() const {
  if (grid.size() != values.size()) throw ValidationError("curve grid and values differ in length");
  if (grid.size() < 2) throw ValidationError("curve needs at least two grid points");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw ValidationError("curve grid must be strictly increasing");
  if (kind == CurveKind::conv_xi_q) {
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
      const double l = (values[i] - values[i - 1]) / (grid[i] - grid[i - 1]);
      const double r = (values[i + 1] - values[i]) / (grid[i + 1] - grid[i]);
      if (r - l < -1e-9) throw ValidationError("envelope curve is not convex");
    }
  }
}

double SampledCurve::at(double alpha) const {
  if (grid.empty()) throw ValidationError("empty curve");
  const double tol = 1e-12 * std::max(1.0, std::abs(grid.back()));
  if (alpha < grid.front() - tol || alpha > grid.back() + tol)
    throw ValidationError("alpha outside the curve's grid");
  if (alpha <= grid.front()) return values.front();
  if (alpha >= grid.back()) return values.back();
  const auto it = std::upper_bound(grid.begin(), grid.end(), alpha);
  const std::size_t j = static_cast<std::size_t>(it - grid.begin());
  const double t = (alpha - grid[j - 1]) / (grid[j] - grid[j - 1]);
  return values[j - 1] + t * (values[j] - values[j - 1]);
}

std::vector<double> alpha_grid(const Semigroup& s, int points) {
  if (points < 2) throw ValidationError("alpha grid needs at least two points");
  const double top = -std::log(s.min_stationary()) - 1e-6;
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = top * i / (points - 1);
  return g;
}

XiSolution xi_q_solve(const Semigroup& s, double q, double alpha, const SolverConfig& cfg) {
  if (std::isnan(q) || std::isinf(q)) throw ValidationError("q must be finite");
  check_alpha(s, alpha);
  const Eigen::VectorXd& pi = s.stationary();
  std::vector<double> w(pi.data(), pi.data() + pi.size());
  if (alpha == 0.0) return {0.0, w};
  if (s.states() > 4)
    throw ValidationError("alphabet too large for the simplex grid (at most 4 states)");
  SimplexProblem pr = make_problem(s.generator(), w, q, q, 1, alpha);
  SimplexSearchResult r = minimize_on_simplex(pr, search_config(cfg));
  return {r.value, r.point};
}

double xi_q(const Semigroup& s, double q, double alpha, const SolverConfig& cfg) {
  return xi_q_solve(s, q, alpha, cfg).value;
}

SampledCurve xi_curve(const Semigroup& s, double q, const std::vector<double>& grid,
                      const SolverConfig& cfg) {
  SampledCurve c{grid, std::vector<double>(grid.size()), CurveKind::xi_q, q, q, 1};
  parallel_for(grid.size(), cfg.workers, [&](std::size_t i) { c.values[i] = xi_q(s, q, grid[i], cfg); });
  c.validate();
  return c;
}

SampledCurve binary_xi_curve(double q, const std::vector<double>& grid) {
  SampledCurve c{grid, std::vector<double>(grid.size()), CurveKind::xi_q, q, q, 1};
  for (std::size_t i = 0; i < grid.size(); ++i) c.values[i] = binary_xi_q(q, grid[i]);
  c.validate();
  return c;
}

SampledCurve conv_envelope(const SampledCurve& curve) {
  SampledCurve in = curve;
  in.kind = CurveKind::xi_q;
  in.validate();
  const auto& x = curve.grid;
  const auto& y = curve.values;
  // Lower hull, left to right.
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < x.size(); ++i) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2], b = hull.back();
      const double cross = (x[b] - x[a]) * (y[i] - y[a]) - (y[b] - y[a]) * (x[i] - x[a]);
      if (cross <= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(i);
  }
  SampledCurve out = curve;
  out.kind = CurveKind::conv_xi_q;
  std::size_t seg = 0;  // hull[seg] <= i < hull[seg + 1]
  for (std::size_t i = 0; i < x.size(); ++i) {
    while (seg + 1 < hull.size() && hull[seg + 1] <= i) ++seg;
    if (hull[seg] == i) {
      out.values[i] = y[i];
      continue;
    }
    const std::size_t a = hull[seg], b = hull[seg + 1];
    const double t = (x[i] - x[a]) / (x[b] - x[a]);
    out.values[i] = std::min(y[i], y[a] + t * (y[b] - y[a]));
  }
  return out;
}

double phi_pq(double p, double q, const SampledCurve& conv_curve, double alpha) {
  if (std::isnan(p) || std::isnan(q) || p < 0.0 || q < 0.0) throw ValidationError("orders must be nonnegative");
  const double v = conv_curve.at(alpha);  // range check even when p > q
  return p > q ? 0.0 : v;
}

XiSolution xi_pq_n_solve(const Semigroup& s, double p, double q, int n, double alpha,
                         const SolverConfig& cfg) {
  if (std::isnan(p) || p < 0.0) throw ValidationError("p must lie in [0, inf]");
  if (!(q > 0.0) || std::isinf(q))
    throw ValidationError("q must be positive and finite for the n-letter problem");
  check_alpha(s, alpha);
  const ProductSpace space = make_product_space(s.states(), n);
  if (space.size() > kMaxSimplexAtoms)
    throw ValidationError("|X|^n exceeds the n-letter search budget of 64 points");
  std::vector<double> w = product_measure(s.stationary(), n);
  if (alpha == 0.0) return {0.0, w};
  const Eigen::MatrixXd l = product_generator(s, space);
  SimplexProblem pr = make_problem(l, w, p, q, n, alpha);
  SimplexSearchResult r = minimize_on_simplex(pr, search_config(cfg));
  return {r.value, r.point};
}

double xi_pq_n(const Semigroup& s, double p, double q, int n, double alpha, const SolverConfig& cfg) {
  return xi_pq_n_solve(s, p, q, n, alpha, cfg).value;
}

double lsi_constant(const SampledCurve& curve, double q) {
  curve.validate();
  double best = 0.0;
  const double scale = q == 0.0 ? 1.0 : q * q;
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    const double a = curve.grid[i];
    if (!(a > 0.0)) continue;
    const double v = curve.values[i];
    if (!(v > 0.0)) return kInf;
    best = std::max(best, a / (scale * v));
  }
  return best;
}

}  // namespace rsobolev
