#pragma once

#include "rsobolev/semigroup.hpp"
#include "rsobolev/sobolev.hpp"

#include <Eigen/Sparse>

#include <cstdint>
#include <memory>
#include <random>
#include <utility>
#include <vector>

namespace rsobolev {

using SparseMatrix = Eigen::SparseMatrix<double>;

// Simple undirected d-regular graph.
class Graph {
 public:
  static Graph from_edges(int vertex_count, const std::vector<std::pair<int, int>>& edges);
  static Graph hypercube(int n);
  static Graph complete(int k);
  static Graph cycle(int k);

  int vertex_count() const { return static_cast<int>(neighbors_.size()); }
  int degree() const { return degree_; }
  std::size_t edge_count() const;
  const std::vector<std::vector<int>>& neighbors() const { return neighbors_; }
  bool adjacent(int u, int v) const;
  SparseMatrix adjacency() const;

 private:
  friend Graph cartesian_power(const Graph& g, int n);
  explicit Graph(std::vector<std::vector<int>> neighbors);
  std::vector<std::vector<int>> neighbors_;
  int degree_ = 0;
};

// Random simple d-regular graph from the pairing model (retries until simple).
Graph random_regular_graph(int vertices, int degree, std::mt19937_64& rng);

// Induced subgraph on a vertex subset of a parent graph.
class SubgraphView {
 public:
  SubgraphView(std::shared_ptr<const Graph> parent, std::vector<int> vertices);

  const Graph& parent() const { return *parent_; }
  const std::vector<int>& vertices() const { return vertices_; }
  SparseMatrix adjacency() const;
  int max_degree() const;

 private:
  std::shared_ptr<const Graph> parent_;
  std::vector<int> vertices_;
};

// L = A - dI with uniform stationary law.
Semigroup graph_generator(const Graph& g);

// G^n with the lexicographic vertex order of X^n.
Graph cartesian_power(const Graph& g, int n);

// Rayleigh q-quotient; q in [0, +inf].
double rayleigh_q(const SparseMatrix& a, std::span<const double> f, double q);
double rayleigh_q(const Eigen::MatrixXd& a, std::span<const double> f, double q);

struct RadiusConfig {
  int random_starts = 16;
  int max_iterations = 10'000;
  double relative_tolerance = 1e-12;
  double power_tolerance = 1e-10;
  std::uint64_t seed = 0;
};

struct RadiusResult {
  double value;
  std::vector<double> certificate;  // maximizing f when one is produced
};

RadiusResult q_radius(const SparseMatrix& a, double q, const RadiusConfig& cfg = {});
RadiusResult q_radius(const Eigen::MatrixXd& a, double q, const RadiusConfig& cfg = {});
RadiusResult subgraph_q_radius(const SubgraphView& view, double q, const RadiusConfig& cfg = {});

struct FaberKrahnResult {
  double value;
  std::vector<int> witness;  // sorted vertices of G^n
};

struct FaberKrahnConfig {
  RadiusConfig radius{4, 10'000, 1e-12, 1e-10, 0};
  unsigned workers = 1;
  std::size_t budget_general = 16;
  std::size_t budget_q2 = 20;
};

// max over induced subgraphs of G^n with at most m vertices of rho_q.
FaberKrahnResult faber_krahn_exact(const Graph& g, int n, double q, int m,
                                   const FaberKrahnConfig& cfg = {});

// n (d - (q - 1) conv Xi_q(alpha)) with alpha = ln|V| - (1/n) ln m.
double faber_krahn_bound(int degree, double q, const SampledCurve& conv_curve, int vertex_count,
                         int n, int m);

// Two-point specialization: n (y^{1/q}(1-y)^{1/q'} + y^{1/q'}(1-y)^{1/q}),
// with y = h^{-1}((1/n) ln m).
double binary_faber_krahn_bound(double q, int n, int m);

// Vertices of {0,1}^n with Hamming weight in `radii`.
SubgraphView hamming_shell_subgraph(int n, const std::vector<int>& radii);

}  // namespace rsobolev
