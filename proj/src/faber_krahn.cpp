#include "rsobolev/errors.hpp"
#include "rsobolev/graph.hpp"
#include "rsobolev/parallel.hpp"

#include <bit>
#include <cmath>

namespace rsobolev {

namespace {

using Mask = std::uint32_t;

struct Best {
  double value = -1.0;
  Mask mask = 0;
};

// Larger value wins; values within 1e-12 tie and the smaller mask wins.
bool better(double value, Mask mask, const Best& b) {
  if (value > b.value + 1e-12) return true;
  return std::abs(value - b.value) <= 1e-12 && mask < b.mask;
}

bool connected(Mask mask, const std::vector<Mask>& nb) {
  Mask reach = mask & (~mask + 1);  // lowest vertex
  for (;;) {
    Mask next = reach;
    for (Mask r = reach; r; r &= r - 1) next |= nb[static_cast<std::size_t>(std::countr_zero(r))] & mask;
    if (next == reach) break;
    reach = next;
  }
  return reach == mask;
}

double subset_radius(Mask mask, const std::vector<Mask>& nb, double q, const RadiusConfig& cfg) {
  std::vector<int> verts;
  for (Mask r = mask; r; r &= r - 1) verts.push_back(std::countr_zero(r));
  const int k = static_cast<int>(verts.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (nb[static_cast<std::size_t>(verts[static_cast<std::size_t>(i)])] >> verts[static_cast<std::size_t>(j)] & 1u)
        a(i, j) = 1.0;
  if (q == 2.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(k - 1);
  }
  return q_radius(a, q, cfg).value;
}

}  // namespace

FaberKrahnResult faber_krahn_exact(const Graph& g, int n, double q, int m, const FaberKrahnConfig& cfg) {
  if (std::isnan(q) || q < 1.0) throw ValidationError("Faber-Krahn maxima need q in [1, inf]");
  if (m < 1) throw ValidationError("m must be at least 1");
  const double total = std::pow(static_cast<double>(g.vertex_count()), n);
  const std::size_t budget = q == 2.0 ? cfg.budget_q2 : cfg.budget_general;
  if (total > static_cast<double>(budget))
    throw ValidationError("|V|^n exceeds the exhaustive enumeration budget; use faber_krahn_bound "
                          "or hamming_shell_subgraph instead");
  const Graph gn = cartesian_power(g, n);
  const int size = gn.vertex_count();
  m = std::min(m, size);
  if (m == 1) return {0.0, {0}};

  std::vector<Mask> nb(static_cast<std::size_t>(size), 0);
  for (int v = 0; v < size; ++v)
    for (int u : gn.neighbors()[static_cast<std::size_t>(v)]) nb[static_cast<std::size_t>(v)] |= Mask{1} << u;

  // rho_q is monotone under inclusion and equals the max over components, so
  // connected sets of exactly min(m, component size) vertices suffice. Since
  // G^n of a connected G is connected, that is exactly m vertices.
  const std::uint64_t count = std::uint64_t{1} << size;
  const unsigned workers = std::max(1u, resolve_workers(cfg.workers));
  std::vector<Best> partial(workers);
  parallel_for(workers, workers, [&](std::size_t w) {
    Best& best = partial[w];
    const std::uint64_t lo = count * w / workers, hi = count * (w + 1) / workers;
    for (std::uint64_t i = lo; i < hi; ++i) {
      const Mask mask = static_cast<Mask>(i ^ (i >> 1));  // Gray-code order
      if (std::popcount(mask) != m) continue;
      int maxdeg = 0;
      for (Mask r = mask; r; r &= r - 1)
        maxdeg = std::max(maxdeg, std::popcount(nb[static_cast<std::size_t>(std::countr_zero(r))] & mask));
      if (maxdeg < best.value - 1e-12) continue;  // rho_q <= max degree
      if (!connected(mask, nb)) continue;
      const double v = subset_radius(mask, nb, q, cfg.radius);
      if (better(v, mask, best)) best = {v, mask};
    }
  });
  Best best;
  for (const Best& b : partial)
    if (b.value >= 0.0 && better(b.value, b.mask, best)) best = b;
  if (best.value < 0.0) throw ValidationError("no connected subset of the requested size; G must be connected");
  FaberKrahnResult r{best.value, {}};
  for (Mask x = best.mask; x; x &= x - 1) r.witness.push_back(std::countr_zero(x));
  return r;
}

double faber_krahn_bound(int degree, double q, const SampledCurve& conv_curve, int vertex_count, int n,
                         int m) {
  if (!(q > 1.0)) throw ValidationError("the Faber-Krahn bound needs q > 1");
  if (n < 1 || m < 1 || vertex_count < 2) throw ValidationError("need n >= 1, m >= 1, |V| >= 2");
  const double alpha = std::log(static_cast<double>(vertex_count)) - std::log(static_cast<double>(m)) / n;
  if (alpha < 0.0) throw ValidationError("m exceeds |V|^n");
  return n * (degree - (q - 1.0) * conv_curve.at(alpha));
}

double binary_faber_krahn_bound(double q, int n, int m) {
  if (!(q > 1.0)) throw ValidationError("the Faber-Krahn bound needs q > 1");
  if (n < 1 || m < 1) throw ValidationError("need n >= 1 and m >= 1");
  const double rate = std::log(static_cast<double>(m)) / n;
  if (rate > std::log(2.0) + 1e-15) throw ValidationError("m exceeds 2^n");
  const double y = binary_y_of_alpha(std::max(0.0, std::log(2.0) - rate));
  // 1 - 2(q-1) Xi_q(alpha) for the two-point chain.
  return n * (1.0 - 2.0 * (q - 1.0) * binary_xi_of_y(q, y));
}

SubgraphView hamming_shell_subgraph(int n, const std::vector<int>& radii) {
  auto cube = std::make_shared<const Graph>(Graph::hypercube(n));
  std::vector<bool> keep(static_cast<std::size_t>(n) + 1, false);
  for (int r : radii) {
    if (r < 0 || r > n) throw ValidationError("radius outside [0, n]");
    keep[static_cast<std::size_t>(r)] = true;
  }
  std::vector<int> verts;
  for (int v = 0; v < cube->vertex_count(); ++v)
    if (keep[static_cast<std::size_t>(std::popcount(static_cast<unsigned>(v)))]) verts.push_back(v);
  if (verts.empty()) throw ValidationError("no radii given");
  return SubgraphView(cube, std::move(verts));
}

}  // namespace rsobolev
