#include "oracles.hpp"

#include "rsobolev/errors.hpp"
#include "rsobolev/graph.hpp"
#include "rsobolev/io.hpp"
#include "rsobolev/sobolev.hpp"

#include <doctest.h>

#include <bit>
#include <random>
#include <sstream>

using namespace rsobolev;

namespace {

Eigen::MatrixXd dense(const SparseMatrix& a) { return Eigen::MatrixXd(a); }

double largest_eigenvalue(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  return es.eigenvalues()(a.rows() - 1);
}

// max over all vertex subsets of size <= m (connected or not) of the top
// adjacency eigenvalue.
double faber_krahn_all_subsets(const Eigen::MatrixXd& a, int m) {
  const int n = int(a.rows());
  double best = 0.0;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    const int k = std::popcount(mask);
    if (k > m) continue;
    std::vector<int> v;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1u) v.push_back(i);
    Eigen::MatrixXd sub(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) sub(i, j) = a(v[std::size_t(i)], v[std::size_t(j)]);
    best = std::max(best, largest_eigenvalue(sub));
  }
  return best;
}

}  // namespace

TEST_CASE("graph constructors validate simple regular graphs") {
  CHECK(Graph::hypercube(3).vertex_count() == 8);
  CHECK(Graph::hypercube(3).degree() == 3);
  CHECK(Graph::hypercube(3).edge_count() == 12);
  CHECK(Graph::complete(4).degree() == 3);
  CHECK(Graph::cycle(5).edge_count() == 5);
  CHECK_THROWS_AS(Graph::from_edges(3, {{0, 1}, {1, 2}}), ValidationError);          // not regular
  CHECK_THROWS_AS(Graph::from_edges(2, {{0, 1}, {0, 1}}), ValidationError);          // multi-edge
  CHECK_THROWS_AS(Graph::from_edges(2, {{0, 0}, {1, 1}}), ValidationError);          // loops
  CHECK_THROWS_AS(Graph::from_edges(2, {{0, 2}}), ValidationError);                  // out of range
  std::mt19937_64 rng(4);
  const Graph g = random_regular_graph(10, 3, rng);
  CHECK(g.degree() == 3);
  CHECK(g.vertex_count() == 10);
}

TEST_CASE("Cartesian power adjacency equals the Kronecker sum") {
  const Graph c3 = Graph::cycle(3);
  const Graph sq = cartesian_power(c3, 2);
  const Eigen::MatrixXd a = dense(c3.adjacency());
  const Eigen::MatrixXd ref = oracle::kron_sum(a, 2);
  CHECK((dense(sq.adjacency()) - ref).cwiseAbs().maxCoeff() == 0.0);
  // Pairwise: (x1, x2) ~ (y1, y2) iff they differ in one coordinate by a cycle step.
  for (int u = 0; u < 9; ++u)
    for (int v = 0; v < 9; ++v) {
      const int du = u / 3, dv = v / 3, eu = u % 3, ev = v % 3;
      const bool adj = (du == dv && eu != ev) || (eu == ev && du != dv);
      CHECK(sq.adjacent(u, v) == adj);
    }
  CHECK(sq.degree() == 4);
  CHECK((dense(cartesian_power(Graph::hypercube(1), 3).adjacency()) - dense(Graph::hypercube(3).adjacency()))
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("graph generator is A - dI with the uniform law") {
  const Graph g = Graph::cycle(5);
  const Semigroup s = graph_generator(g);
  const Eigen::MatrixXd ref = dense(g.adjacency()) - 2.0 * Eigen::MatrixXd::Identity(5, 5);
  CHECK((s.generator() - ref).cwiseAbs().maxCoeff() == 0.0);
  CHECK(s.stationary()(3) == doctest::Approx(0.2));
}

TEST_CASE("Rayleigh q-quotient branches") {
  const SparseMatrix a = Graph::cycle(4).adjacency();
  const std::vector<double> f{1.0, 2.0, 0.5, 1.5};
  // sum_x f(x) sum_y A(x, y) f(y)^{q-1} / sum f^q
  auto direct = [&](double q) {
    const Eigen::MatrixXd d = dense(a);
    double num = 0.0, den = 0.0;
    for (int x = 0; x < 4; ++x) {
      den += std::pow(f[std::size_t(x)], q);
      for (int y = 0; y < 4; ++y) num += f[std::size_t(x)] * d(x, y) * std::pow(f[std::size_t(y)], q - 1.0);
    }
    return num / den;
  };
  for (double q : {1.5, 2.0, 3.0, 0.5}) CHECK(rayleigh_q(a, f, q) == doctest::Approx(direct(q)).epsilon(1e-13));
  // q = 1 with full support: sum_x f(x) deg(x) / sum_x f(x) = 2 on the cycle.
  CHECK(rayleigh_q(a, f, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
  // q = inf: average over argmax points y of sum_x f(x)/f(y) A(x, y).
  CHECK(rayleigh_q(a, f, kInf) == doctest::Approx((1.0 + 0.5) / 2.0).epsilon(1e-14));
  // q = 0 with full support: mean over x of sum_y f(x) A(x, y) / f(y).
  double zero = 0.0;
  {
    const Eigen::MatrixXd d = dense(a);
    for (int x = 0; x < 4; ++x)
      for (int y = 0; y < 4; ++y) zero += f[std::size_t(x)] * d(x, y) / f[std::size_t(y)];
    zero /= 4.0;
  }
  CHECK(rayleigh_q(a, f, 0.0) == doctest::Approx(zero).epsilon(1e-13));
  const std::vector<double> holes{1.0, 0.0, 1.0, 0.0};
  CHECK(rayleigh_q(a, holes, 0.0) == kInf);
  CHECK(rayleigh_q(a, holes, 0.5) == kInf);
  CHECK_THROWS_AS(rayleigh_q(a, std::vector<double>{0, 0, 0, 0}, 2.0), ValidationError);
}

TEST_CASE("q-radius on regular graphs and small matrices") {
  for (double q : {1.0, 1.5, 2.0, 3.0, kInf})
    CHECK(q_radius(Graph::complete(4).adjacency(), q).value == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(q_radius(Graph::hypercube(3).adjacency(), 2.0).value == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(q_radius(Graph::hypercube(2).adjacency(), 0.0).value == kInf);
  CHECK_THROWS_AS(q_radius(Graph::hypercube(2).adjacency(), 0.5), ValidationError);

  // Path on three vertices: spectral radius sqrt(2).
  Eigen::MatrixXd path = Eigen::MatrixXd::Zero(3, 3);
  path(0, 1) = path(1, 0) = path(1, 2) = path(2, 1) = 1.0;
  CHECK(q_radius(path, 2.0).value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  CHECK(q_radius(path, 1.0).value == doctest::Approx(2.0));
  // The radius dominates the quotient of any positive function.
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (double q : {1.25, 3.0}) {
    const RadiusResult r = q_radius(path, q);
    CHECK(rayleigh_q(path, r.certificate, q) == doctest::Approx(r.value).epsilon(1e-10));
    for (int t = 0; t < 200; ++t) {
      const std::vector<double> f{u(rng), u(rng), u(rng)};
      CHECK(rayleigh_q(path, f, q) <= r.value + 1e-10);
    }
  }
}

TEST_CASE("q-radius is symmetric under Holder conjugation") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 5; ++t) {
    const Graph g = random_regular_graph(8, 3, rng);
    const auto view = SubgraphView(std::make_shared<const Graph>(g), {0, 1, 2, 3, 4, 5});
    for (double q : {1.5, 3.0})
      CHECK(subgraph_q_radius(view, q).value ==
            doctest::Approx(subgraph_q_radius(view, q / (q - 1.0)).value).epsilon(1e-7));
  }
}

TEST_CASE("Faber-Krahn maxima on hypercubes") {
  const Graph k2 = Graph::hypercube(1);
  CHECK(faber_krahn_exact(k2, 2, 2.0, 2).value == doctest::Approx(1.0).epsilon(1e-12));
  const FaberKrahnResult r = faber_krahn_exact(k2, 3, 2.0, 4);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
  // The witness is a 2-dimensional subcube: one coordinate is fixed.
  REQUIRE(r.witness.size() == 4);
  unsigned all_and = 7, all_or = 0;
  for (int v : r.witness) {
    all_and &= unsigned(v);
    all_or |= unsigned(v);
  }
  CHECK(std::popcount((~all_or & 7u) | all_and) == 1);
  CHECK(faber_krahn_exact(k2, 3, 2.0, 1).value == 0.0);
  CHECK_THROWS_AS(faber_krahn_exact(k2, 5, 3.0, 4), ValidationError);
  CHECK_THROWS_AS(faber_krahn_exact(k2, 3, 0.5, 4), ValidationError);
}

TEST_CASE("Faber-Krahn enumeration over connected sets matches all subsets") {
  for (const auto& [g, n] : std::vector<std::pair<Graph, int>>{{Graph::hypercube(1), 4}, {Graph::cycle(3), 2}, {Graph::complete(4), 2}})
    for (int m = 2; m <= 7; ++m) {
      const Eigen::MatrixXd a = dense(cartesian_power(g, n).adjacency());
      CHECK(faber_krahn_exact(g, n, 2.0, m).value == doctest::Approx(faber_krahn_all_subsets(a, m)).epsilon(1e-10));
    }
}

TEST_CASE("Faber-Krahn maxima are symmetric in q and respect the two-point bound") {
  const Graph k2 = Graph::hypercube(1);
  for (int m : {3, 5, 8}) {
    const double a = faber_krahn_exact(k2, 4, 3.0, m).value;
    const double b = faber_krahn_exact(k2, 4, 1.5, m).value;
    CHECK(a == doctest::Approx(b).epsilon(1e-7));
    CHECK(a <= binary_faber_krahn_bound(3.0, 4, m) + 1e-9);
    CHECK(faber_krahn_exact(k2, 4, 2.0, m).value <= binary_faber_krahn_bound(2.0, 4, m) + 1e-9);
  }
  // At m = 2^n the bound is n.
  CHECK(binary_faber_krahn_bound(2.0, 4, 16) == doctest::Approx(4.0).epsilon(1e-12));
  // At m = 1 the bound is the trivial one from y = 0: n (1 - 2(q-1) Xi_q(ln 2)) = 0.
  CHECK(binary_faber_krahn_bound(2.0, 4, 1) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("general Faber-Krahn bound uses the envelope at ln|V| - ln(m)/n") {
  SampledCurve curve{{0.0, 0.5, 1.0}, {0.0, 0.25, 1.0}, CurveKind::conv_xi_q, 2.0, 2.0, 1};
  const double alpha = std::log(3.0) - std::log(4.0) / 2.0;
  const double expected = 2.0 * (2.0 - curve.at(alpha));
  CHECK(faber_krahn_bound(2, 2.0, curve, 3, 2, 4) == doctest::Approx(expected).epsilon(1e-14));
  CHECK_THROWS_AS(faber_krahn_bound(2, 1.0, curve, 3, 2, 4), ValidationError);
}

TEST_CASE("Hamming shell subgraphs") {
  const SubgraphView v = hamming_shell_subgraph(4, {1, 2});
  CHECK(v.vertices().size() == 10);
  CHECK(v.max_degree() == 3);  // weight-1 vertex: one neighbor at weight 0 is excluded
  for (int x : v.vertices()) {
    const int w = std::popcount(unsigned(x));
    CHECK((w == 1 || w == 2));
  }
  CHECK_THROWS_AS(hamming_shell_subgraph(4, {5}), ValidationError);
}

TEST_CASE("edge-list and matrix parsing") {
  std::istringstream ok("# square\n4 4\n0 1\n1 2\n2 3\n3 0\n");
  const Graph g = parse_edge_list(ok);
  CHECK(g.vertex_count() == 4);
  CHECK(g.degree() == 2);
  std::istringstream bad("3 2\n0 1\n1 x\n");
  CHECK_THROWS_AS(parse_edge_list(bad), ValidationError);
  std::istringstream m("-1 1\n1 -1\n");
  CHECK(parse_matrix(m)(0, 1) == 1.0);
  std::istringstream ragged("-1 1\n1\n");
  CHECK_THROWS_AS(parse_matrix(ragged), ValidationError);
  CHECK(format_double(kInf) == "inf");
  CHECK(format_double(0.5) == "0.5");
}
