#include "rsobolev/simplex_search.hpp"

#include "rsobolev/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>

namespace rsobolev {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Candidate {
  double value;
  std::size_t order;  // grid index; ties resolve to the smallest
  std::vector<double> point;
};

class Evaluator {
 public:
  explicit Evaluator(const SimplexProblem& p) : p_(p) {}

  // Moves q to the feasible side along the ray from its face centre.
  std::optional<std::vector<double>> push(const std::vector<double>& q) const {
    if (p_.constraint(q) >= p_.level) return q;
    const std::size_t k = q.size();
    double center_mass = 0.0;
    std::size_t support = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (q[i] > 0.0) {
        center_mass += p_.center[i];
        ++support;
      }
    if (support <= 1) return std::nullopt;
    std::vector<double> c(k, 0.0), v(k, 0.0);
    for (std::size_t i = 0; i < k; ++i)
      if (q[i] > 0.0) {
        c[i] = p_.center[i] / center_mass;
        v[i] = q[i] - c[i];
      }
    double t_max = kInfinity;
    for (std::size_t i = 0; i < k; ++i)
      if (v[i] < 0.0) t_max = std::min(t_max, c[i] / -v[i]);
    if (!std::isfinite(t_max) || t_max <= 1.0) return std::nullopt;

    auto at = [&](double t) {
      std::vector<double> r(k, 0.0);
      for (std::size_t i = 0; i < k; ++i)
        if (q[i] > 0.0) r[i] = std::max(0.0, c[i] + t * v[i]);
      if (t == t_max)
        for (std::size_t i = 0; i < k; ++i)
          if (v[i] < 0.0 && c[i] / -v[i] == t_max) r[i] = 0.0;
      return r;
    };
    std::vector<double> hi_point = at(t_max);
    if (!(p_.constraint(hi_point) >= p_.level)) return std::nullopt;
    double lo = 1.0, hi = t_max;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      std::vector<double> m = at(mid);
      if (p_.constraint(m) >= p_.level) {
        hi = mid;
        hi_point = std::move(m);
      } else {
        lo = mid;
      }
    }
    return hi_point;
  }

  double value(const std::vector<double>& q) const {
    auto pushed = push(q);
    if (!pushed) return kInfinity;
    if (p_.interior_only)
      for (double x : *pushed)
        if (x <= 0.0) return kInfinity;
    const double v = p_.objective(*pushed);
    return std::isnan(v) ? kInfinity : v;
  }

  const SimplexProblem& problem() const { return p_; }

 private:
  const SimplexProblem& p_;
};

void keep_best(std::vector<Candidate>& best, std::size_t capacity, Candidate c) {
  if (!std::isfinite(c.value)) return;
  auto worse = [](const Candidate& a, const Candidate& b) {
    return a.value < b.value || (a.value == b.value && a.order < b.order);
  };
  if (best.size() == capacity && !worse(c, best.back())) return;
  best.insert(std::upper_bound(best.begin(), best.end(), c, worse), std::move(c));
  if (best.size() > capacity) best.pop_back();
}

// Local search inside the face spanned by the support of `start`, in
// log-ratio coordinates so that masses far below the grid step are reachable.
Candidate polish(const Evaluator& ev, const Candidate& start, int iterations) {
  const std::size_t k = start.point.size();
  std::vector<std::size_t> face;
  for (std::size_t i = 0; i < k; ++i)
    if (start.point[i] > 0.0) face.push_back(i);
  if (face.size() <= 1) return start;

  const std::size_t d = face.size() - 1;
  auto embed = [&](std::span<const double> z) {
    std::vector<double> q(k, 0.0);
    const double top = std::max(0.0, *std::max_element(z.begin(), z.end()));
    double total = std::exp(-top);
    q[face[d]] = total;
    for (std::size_t j = 0; j < d; ++j) total += (q[face[j]] = std::exp(z[j] - top));
    for (double& x : q) x /= total;
    return q;
  };
  auto f = [&](std::span<const double> z) {
    for (double x : z)
      if (!std::isfinite(x)) return kInfinity;
    return ev.value(embed(z));
  };
  std::vector<double> z0(d);
  for (std::size_t j = 0; j < d; ++j) z0[j] = std::log(start.point[face[j]] / start.point[face[d]]);

  Candidate best = start;
  double s = 1.0;
  for (int round = 0; round < 4; ++round) {
    NelderMeadResult r = nelder_mead(f, z0, s, iterations);
    if (r.value < best.value) {
      best.value = r.value;
      best.point = *ev.push(embed(r.x));
    }
    z0 = r.x;
    s *= 0.1;
  }
  return best;
}

template <class Visit>
void for_each_composition(std::size_t atoms, int total, Visit&& visit) {
  std::vector<int> c(atoms, 0);
  // Lexicographic order: first coordinate increases slowest.
  std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
    if (pos + 1 == atoms) {
      c[pos] = left;
      visit(c);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      c[pos] = v;
      rec(pos + 1, left - v);
    }
  };
  rec(0, total);
}

}  // namespace

std::size_t simplex_grid_size(std::size_t atoms, int divisions) {
  // C(divisions + atoms - 1, atoms - 1)
  double r = 1.0;
  for (std::size_t i = 1; i < atoms; ++i) {
    r = r * static_cast<double>(divisions + static_cast<int>(i)) / static_cast<double>(i);
    if (r > 1e18) return std::numeric_limits<std::size_t>::max();
  }
  return static_cast<std::size_t>(std::llround(r));
}

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> start, double step, int max_iterations,
                             double ftol, double xtol) {
  const std::size_t d = start.size();
  const double dd = static_cast<double>(d);
  const bool adaptive = d > 4;
  const double alpha = 1.0;
  const double beta = adaptive ? 1.0 + 2.0 / dd : 2.0;
  const double gamma = adaptive ? 0.75 - 0.5 / dd : 0.5;
  const double delta = adaptive ? 1.0 - 1.0 / dd : 0.5;

  std::vector<std::vector<double>> x(d + 1, start);
  for (std::size_t i = 0; i < d; ++i) x[i + 1][i] += step;
  std::vector<double> fx(d + 1);
  for (std::size_t i = 0; i <= d; ++i) fx[i] = f(x[i]);

  std::vector<std::size_t> idx(d + 1);
  for (int it = 0; it < max_iterations; ++it) {
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
    const std::size_t best = idx.front(), worst = idx.back(), second = idx[d - 1];

    if (!std::isfinite(fx[best]) && it > 0) break;
    double fspread = 0.0, xspread = 0.0;
    for (std::size_t i = 0; i <= d; ++i) {
      fspread = std::max(fspread, std::abs(fx[i] - fx[best]));
      for (std::size_t j = 0; j < d; ++j) xspread = std::max(xspread, std::abs(x[i][j] - x[best][j]));
    }
    if (std::isfinite(fspread) && fspread <= ftol * (std::abs(fx[best]) + 1e-300) + 1e-300 &&
        xspread <= xtol)
      break;
    if (xspread <= 1e-17) break;

    std::vector<double> centroid(d, 0.0);
    for (std::size_t i = 0; i <= d; ++i)
      if (i != worst)
        for (std::size_t j = 0; j < d; ++j) centroid[j] += x[i][j] / dd;
    auto along = [&](double coef) {
      std::vector<double> p(d);
      for (std::size_t j = 0; j < d; ++j) p[j] = centroid[j] + coef * (x[worst][j] - centroid[j]);
      return p;
    };
    std::vector<double> xr = along(-alpha);
    const double fr = f(xr);
    if (fr < fx[best]) {
      std::vector<double> xe = along(-alpha * beta);
      const double fe = f(xe);
      if (fe < fr) {
        x[worst] = std::move(xe);
        fx[worst] = fe;
      } else {
        x[worst] = std::move(xr);
        fx[worst] = fr;
      }
      continue;
    }
    if (fr < fx[second]) {
      x[worst] = std::move(xr);
      fx[worst] = fr;
      continue;
    }
    const bool outside = fr < fx[worst];
    std::vector<double> xc = along(outside ? -alpha * gamma : gamma);
    const double fc = f(xc);
    if (fc < (outside ? fr : fx[worst])) {
      x[worst] = std::move(xc);
      fx[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < d; ++j) x[i][j] = x[best][j] + delta * (x[i][j] - x[best][j]);
      fx[i] = f(x[i]);
    }
  }
  std::size_t b = 0;
  for (std::size_t i = 1; i <= d; ++i)
    if (fx[i] < fx[b]) b = i;
  return {x[b], fx[b]};
}

SimplexSearchResult minimize_on_simplex(const SimplexProblem& problem,
                                        const SimplexSearchConfig& config) {
  const std::size_t k = problem.atoms;
  if (k < 1 || problem.center.size() != k) throw ValidationError("simplex problem has mismatched sizes");
  for (double c : problem.center)
    if (!(c > 0.0)) throw ValidationError("simplex centre must be strictly positive");

  Evaluator ev(problem);
  const std::size_t capacity = static_cast<std::size_t>(std::max(1, config.polish_starts));
  std::vector<Candidate> best;
  {
    std::vector<double> c = problem.center;
    keep_best(best, capacity, Candidate{ev.value(c), 0, c});
  }

  int divisions = std::max(1, config.grid_divisions);
  while (divisions > 8 && simplex_grid_size(k, divisions) > config.max_grid_points) divisions /= 2;
  const bool use_grid = !config.force_random && simplex_grid_size(k, divisions) <= config.max_grid_points;

  if (use_grid) {
    std::size_t order = 1;
    std::vector<double> q(k);
    for_each_composition(k, divisions, [&](const std::vector<int>& comp) {
      bool interior = true;
      for (std::size_t i = 0; i < k; ++i) {
        q[i] = static_cast<double>(comp[i]) / divisions;
        interior = interior && comp[i] > 0;
      }
      const std::size_t here = order++;
      if (problem.interior_only && !interior) return;
      keep_best(best, capacity, Candidate{ev.value(q), here, q});
    });
  } else {
    std::mt19937_64 rng(config.seed);
    std::exponential_distribution<double> expo(1.0);
    std::uniform_int_distribution<std::size_t> pick(1, k);
    for (int s = 0; s < config.random_starts; ++s) {
      std::vector<double> q(k, 0.0);
      // Alternate full-support and sparse-support starts.
      const std::size_t support = (s % 2 == 0 || problem.interior_only) ? k : pick(rng);
      std::vector<std::size_t> perm(k);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      double total = 0.0;
      for (std::size_t j = 0; j < support; ++j) total += (q[perm[j]] = expo(rng));
      for (double& v : q) v /= total;
      keep_best(best, capacity, Candidate{ev.value(q), static_cast<std::size_t>(s) + 1, q});
    }
  }

  if (best.empty() || !std::isfinite(best.front().value))
    throw NumericalError("no feasible point found on the simplex");

  // Replace raw candidates by their feasible images, then polish each.
  Candidate overall = best.front();
  overall.point = *ev.push(overall.point);
  for (const Candidate& c : best) {
    Candidate start = c;
    start.point = *ev.push(c.point);
    Candidate r = polish(ev, start, config.polish_iterations);
    // A face optimum may sit next to a full-support one, so polish again from
    // a slightly interior copy.
    if (std::find(r.point.begin(), r.point.end(), 0.0) != r.point.end()) {
      Candidate inner = r;
      // Lift only the empty atoms: mixing with the centre would stay on the
      // push ray and land back on r.
      for (std::size_t i = 0; i < k; ++i)
        if (inner.point[i] == 0.0) inner.point[i] = 1e-3 * problem.center[i];
      const double total = std::accumulate(inner.point.begin(), inner.point.end(), 0.0);
      for (double& x : inner.point) x /= total;
      if (auto pushed = ev.push(inner.point)) {
        inner.point = *pushed;
        inner.value = ev.value(inner.point);
        if (std::isfinite(inner.value)) {
          Candidate ri = polish(ev, inner, config.polish_iterations);
          if (ri.value < r.value) r = std::move(ri);
        }
      }
    }
    if (r.value < overall.value) overall = std::move(r);
  }
  return SimplexSearchResult{overall.value, overall.point, use_grid, use_grid ? divisions : 0};
}

}  // namespace rsobolev
