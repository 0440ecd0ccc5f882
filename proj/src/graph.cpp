#include "rsobolev/graph.hpp"

#include "rsobolev/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace rsobolev {

namespace {

Eigen::VectorXd pow_vec(const Eigen::VectorXd& v, double e) {
  Eigen::VectorXd r(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) r(i) = v(i) == 0.0 ? (e == 0.0 ? 1.0 : 0.0) : std::pow(v(i), e);
  return r;
}

double max_row_sum(const SparseMatrix& a) {
  double best = 0.0;
  for (Eigen::Index k = 0; k < a.outerSize(); ++k) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) s += it.value();
    best = std::max(best, s);
  }
  return best;
}

RadiusResult perron(const SparseMatrix& a, const RadiusConfig& cfg) {
  const Eigen::Index n = a.rows();
  const double shift = max_row_sum(a);
  Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double lambda = 0.0;
  // Shifting by the max row sum makes the spectrum of A + cI nonnegative, so
  // bipartite graphs do not oscillate.
  for (int it = 0; it < 1'000'000; ++it) {
    Eigen::VectorXd av = a * v;
    lambda = v.dot(av);
    const double residual = (av - lambda * v).norm();
    if (residual <= cfg.power_tolerance * std::max(1.0, std::abs(lambda))) {
      std::vector<double> cert(v.data(), v.data() + n);
      for (double& c : cert) c = std::max(0.0, c);
      return {lambda, cert};
    }
    v = av + shift * v;
    v /= v.norm();
  }
  throw NumericalError("power iteration did not converge");
}

}  // namespace

Graph::Graph(std::vector<std::vector<int>> neighbors) : neighbors_(std::move(neighbors)) {
  for (auto& row : neighbors_) std::sort(row.begin(), row.end());
  degree_ = neighbors_.empty() ? 0 : static_cast<int>(neighbors_.front().size());
  for (const auto& row : neighbors_)
    if (static_cast<int>(row.size()) != degree_) throw ValidationError("graph is not regular");
}

Graph Graph::from_edges(int vertex_count, const std::vector<std::pair<int, int>>& edges) {
  if (vertex_count < 1) throw ValidationError("graph needs at least one vertex");
  std::vector<std::vector<int>> nb(static_cast<std::size_t>(vertex_count));
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= vertex_count || v >= vertex_count)
      throw ValidationError("edge endpoint out of range");
    if (u == v) throw ValidationError("self-loops are not allowed");
    if (!seen.insert({std::min(u, v), std::max(u, v)}).second)
      throw ValidationError("duplicate edge");
    nb[static_cast<std::size_t>(u)].push_back(v);
    nb[static_cast<std::size_t>(v)].push_back(u);
  }
  return Graph(std::move(nb));
}

Graph Graph::hypercube(int n) {
  if (n < 1 || n > 20) throw ValidationError("hypercube dimension must lie in [1, 20]");
  const int size = 1 << n;
  std::vector<std::vector<int>> nb(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i)
    for (int b = 0; b < n; ++b) nb[static_cast<std::size_t>(i)].push_back(i ^ (1 << b));
  return Graph(std::move(nb));
}

Graph Graph::complete(int k) {
  if (k < 2) throw ValidationError("complete graph needs at least two vertices");
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < k; ++u)
    for (int v = u + 1; v < k; ++v) e.emplace_back(u, v);
  return from_edges(k, e);
}

Graph Graph::cycle(int k) {
  if (k < 3) throw ValidationError("cycle needs at least three vertices");
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < k; ++u) e.emplace_back(u, (u + 1) % k);
  return from_edges(k, e);
}

std::size_t Graph::edge_count() const {
  std::size_t total = 0;
  for (const auto& row : neighbors_) total += row.size();
  return total / 2;
}

bool Graph::adjacent(int u, int v) const {
  const auto& row = neighbors_.at(static_cast<std::size_t>(u));
  return std::binary_search(row.begin(), row.end(), v);
}

SparseMatrix Graph::adjacency() const {
  std::vector<Eigen::Triplet<double>> t;
  for (int u = 0; u < vertex_count(); ++u)
    for (int v : neighbors_[static_cast<std::size_t>(u)]) t.emplace_back(u, v, 1.0);
  SparseMatrix a(vertex_count(), vertex_count());
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

Graph random_regular_graph(int vertices, int degree, std::mt19937_64& rng) {
  if (vertices < 1 || degree < 0 || degree >= vertices || (vertices * degree) % 2 != 0)
    throw ValidationError("no simple regular graph with these parameters");
  for (int attempt = 0; attempt < 100'000; ++attempt) {
    std::vector<int> stubs;
    for (int v = 0; v < vertices; ++v)
      for (int j = 0; j < degree; ++j) stubs.push_back(v);
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::set<std::pair<int, int>> edges;
    bool ok = true;
    for (std::size_t i = 0; i < stubs.size() && ok; i += 2) {
      const int u = stubs[i], v = stubs[i + 1];
      ok = u != v && edges.insert({std::min(u, v), std::max(u, v)}).second;
    }
    if (ok) return Graph::from_edges(vertices, {edges.begin(), edges.end()});
  }
  throw NumericalError("pairing model failed to produce a simple graph");
}

SubgraphView::SubgraphView(std::shared_ptr<const Graph> parent, std::vector<int> vertices)
    : parent_(std::move(parent)), vertices_(std::move(vertices)) {
  if (!parent_) throw ValidationError("subgraph needs a parent graph");
  std::sort(vertices_.begin(), vertices_.end());
  vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
  if (vertices_.empty()) throw ValidationError("subgraph vertex set is empty");
  if (vertices_.front() < 0 || vertices_.back() >= parent_->vertex_count())
    throw ValidationError("subgraph vertex out of range");
}

SparseMatrix SubgraphView::adjacency() const {
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    for (int v : parent_->neighbors()[static_cast<std::size_t>(vertices_[i])]) {
      auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
      if (it != vertices_.end() && *it == v)
        t.emplace_back(static_cast<int>(i), static_cast<int>(it - vertices_.begin()), 1.0);
    }
  const int k = static_cast<int>(vertices_.size());
  SparseMatrix a(k, k);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

int SubgraphView::max_degree() const { return static_cast<int>(max_row_sum(adjacency())); }

Semigroup graph_generator(const Graph& g) {
  if (g.vertex_count() < 2) throw ValidationError("graph generator needs at least two vertices");
  Eigen::MatrixXd l = Eigen::MatrixXd(g.adjacency());
  l.diagonal().array() -= g.degree();
  return validate_semigroup(l);
}

Graph cartesian_power(const Graph& g, int n) {
  const ProductSpace space = make_product_space(g.vertex_count(), n);
  const std::size_t size = space.size();
  const std::size_t k = static_cast<std::size_t>(g.vertex_count());
  std::vector<std::vector<int>> nb(size);
  for (std::size_t i = 0; i < size; ++i) {
    for (int c = 0; c < n; ++c) {
      const std::size_t stride = space.stride(c);
      const std::size_t x = (i / stride) % k;
      const std::size_t base = i - x * stride;
      for (int y : g.neighbors()[x]) nb[i].push_back(static_cast<int>(base + static_cast<std::size_t>(y) * stride));
    }
  }
  return Graph(std::move(nb));
}

double rayleigh_q(const SparseMatrix& a, std::span<const double> f, double q) {
  const Eigen::Index n = a.rows();
  if (static_cast<Eigen::Index>(f.size()) != n || a.cols() != n)
    throw ValidationError("function length does not match the matrix");
  if (std::isnan(q) || q < 0.0) throw ValidationError("q must lie in [0, inf]");
  bool any = false;
  for (double v : f) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("function must be finite and nonnegative");
    any = any || v > 0.0;
  }
  if (!any) throw ValidationError("function is identically zero");

  // Visit each stored entry as (x, y, A_xy).
  auto for_entries = [&](auto&& visit) {
    for (Eigen::Index k = 0; k < a.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(a, k); it; ++it)
        visit(static_cast<std::size_t>(it.row()), static_cast<std::size_t>(it.col()), it.value());
  };

  if (q == 0.0) {
    double theta = 0.0, inner = 0.0;
    std::size_t support = 0;
    for (double v : f) support += v > 0.0;
    for_entries([&](std::size_t x, std::size_t y, double axy) {
      if (f[x] <= 0.0) return;
      if (f[y] > 0.0)
        inner += f[x] * axy / f[y];
      else
        theta += f[x] * axy;
    });
    if (theta > 0.0) return kInf;
    if (theta < 0.0) return -kInf;
    return inner / static_cast<double>(support);
  }
  if (q == 1.0) {
    double num = 0.0, den = 0.0;
    for (double v : f) den += v;
    for_entries([&](std::size_t x, std::size_t y, double axy) {
      if (f[x] > 0.0 && f[y] > 0.0) num += f[x] * axy;
    });
    return num / den;
  }
  if (std::isinf(q)) {
    const double f0 = *std::max_element(f.begin(), f.end());
    double num = 0.0;
    std::size_t count = 0;
    for (double v : f) count += v == f0;
    for_entries([&](std::size_t x, std::size_t y, double axy) {
      if (f[y] == f0) num += f[x] / f0 * axy;
    });
    return num / static_cast<double>(count);
  }
  double num = 0.0, den = 0.0;
  for (double v : f) den += v > 0.0 ? std::pow(v, q) : 0.0;
  bool infinite = false;
  for_entries([&](std::size_t x, std::size_t y, double axy) {
    const double lhs = f[x] * axy;
    if (lhs == 0.0) return;
    if (f[y] == 0.0) {
      if (q < 1.0) infinite = true;
      return;
    }
    num += lhs * std::pow(f[y], q - 1.0);
  });
  if (infinite) return kInf;
  return num / den;
}

double rayleigh_q(const Eigen::MatrixXd& a, std::span<const double> f, double q) {
  return rayleigh_q(SparseMatrix(a.sparseView()), f, q);
}

RadiusResult q_radius(const SparseMatrix& a, double q, const RadiusConfig& cfg) {
  if (a.rows() != a.cols() || a.rows() == 0) throw ValidationError("matrix must be square and nonempty");
  if (std::isnan(q) || q < 0.0) throw ValidationError("q must lie in [1, inf]");
  if (q == 0.0) return {kInf, {}};
  if (q < 1.0) throw ValidationError("q-radius is defined here for q in [1, inf] (and q = 0)");
  for (Eigen::Index k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it)
      if (it.value() < 0.0) throw ValidationError("matrix must be entrywise nonnegative");

  const Eigen::Index n = a.rows();
  if (a.nonZeros() == 0) return {0.0, std::vector<double>(static_cast<std::size_t>(n), 1.0)};
  if (q == 1.0 || std::isinf(q)) return {max_row_sum(a), {}};
  if (q == 2.0) return perron(a, cfg);

  const double ea = 1.0 / q, eb = 1.0 - 1.0 / q;
  auto objective = [&](const Eigen::VectorXd& dist) {
    return pow_vec(dist, ea).dot(a * pow_vec(dist, eb));
  };

  std::vector<Eigen::VectorXd> starts;
  starts.push_back(Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
  {
    // Squared Perron vector: the exact optimizer at q = 2, a good seed nearby.
    RadiusResult p2 = perron(a, cfg);
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(p2.certificate.data(), n);
    v = v.cwiseProduct(v);
    if (v.sum() > 0.0) starts.push_back(v / v.sum());
  }
  std::mt19937_64 rng(cfg.seed);
  std::exponential_distribution<double> expo(1.0);
  for (int s = 0; s < cfg.random_starts; ++s) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = expo(rng);
    starts.push_back(v / v.sum());
  }

  double best = -kInf;
  Eigen::VectorXd best_q;
  for (Eigen::VectorXd cur : starts) {
    for (int it = 0; it < cfg.max_iterations; ++it) {
      const Eigen::VectorXd qa = pow_vec(cur, ea), qb = pow_vec(cur, eb);
      const double f = qa.dot(a * qb);
      if (f > best) {
        best = f;
        best_q = cur;
      }
      if (!(f > 0.0)) break;
      Eigen::VectorXd next = (ea * qa.cwiseProduct(a * qb) + eb * qb.cwiseProduct(a * qa)) / f;
      next = 0.5 * (cur + next);
      next /= next.sum();
      const double change = (next - cur).cwiseAbs().maxCoeff();
      cur = std::move(next);
      if (change <= cfg.relative_tolerance * cur.maxCoeff()) break;
    }
    const double f = objective(cur);
    if (f > best) {
      best = f;
      best_q = cur;
    }
  }
  std::vector<double> cert(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) cert[static_cast<std::size_t>(i)] = std::pow(best_q(i), 1.0 / q);
  return {best, cert};
}

RadiusResult q_radius(const Eigen::MatrixXd& a, double q, const RadiusConfig& cfg) {
  return q_radius(SparseMatrix(a.sparseView()), q, cfg);
}

RadiusResult subgraph_q_radius(const SubgraphView& view, double q, const RadiusConfig& cfg) {
  return q_radius(view.adjacency(), q, cfg);
}

}  // namespace rsobolev
