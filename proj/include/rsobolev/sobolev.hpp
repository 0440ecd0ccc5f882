#pragma once

#include "rsobolev/entropy.hpp"
#include "rsobolev/semigroup.hpp"
#include "rsobolev/simplex_search.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rsobolev {

enum class CurveKind { xi_q, conv_xi_q, xi_pq_n, inverse };

std::string to_string(CurveKind kind);

struct SampledCurve {
  std::vector<double> grid;
  std::vector<double> values;
  CurveKind kind = CurveKind::xi_q;
  double q = 2.0;
  double p = 2.0;
  int n = 1;

  // Throws unless the grid is strictly increasing and sizes agree; conv
  // curves must also have second differences >= -1e-9.
  void validate() const;
  // Linear interpolation; alpha must lie inside the grid.
  double at(double alpha) const;
};

struct SolverConfig {
  int grid_divisions = 400;
  std::size_t max_grid_points = 250'000;
  int polish_starts = 3;
  int polish_iterations = 4000;
  int random_starts = 16;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

// ---- binary chain, closed form --------------------------------------------

// D(Bern(y) || Bern(1/2)) = ln 2 - h(y), accurate near both ends.
double binary_divergence(double y);
// The y in [0, 1/2] with ln 2 - h(y) = alpha.
double binary_y_of_alpha(double alpha);
// Closed-form log-Sobolev function of the two-point chain, as a function of y.
double binary_xi_of_y(double q, double y);
double binary_xi_q(double q, double alpha);

// ---- general finite chains ------------------------------------------------

// Default alpha grid: `points` evenly spaced values on [0, -ln min pi - 1e-6].
std::vector<double> alpha_grid(const Semigroup& s, int points = 64);

struct XiSolution {
  double value;
  std::vector<double> argmin;  // optimal Q found
};

XiSolution xi_q_solve(const Semigroup& s, double q, double alpha, const SolverConfig& cfg = {});
double xi_q(const Semigroup& s, double q, double alpha, const SolverConfig& cfg = {});

SampledCurve xi_curve(const Semigroup& s, double q, const std::vector<double>& grid,
                      const SolverConfig& cfg = {});
SampledCurve binary_xi_curve(double q, const std::vector<double>& grid);

SampledCurve conv_envelope(const SampledCurve& curve);

double phi_pq(double p, double q, const SampledCurve& conv_curve, double alpha);

// Objective (1/((q-1)n)) E_n((Q/pi^n)^{1/q}, (Q/pi^n)^{1/q'}) minimized over Q
// on X^n subject to (1/n) D_{p/q}(Q || pi^n) >= alpha.
XiSolution xi_pq_n_solve(const Semigroup& s, double p, double q, int n, double alpha,
                         const SolverConfig& cfg = {});
double xi_pq_n(const Semigroup& s, double p, double q, int n, double alpha,
               const SolverConfig& cfg = {});

// sup over the grid of alpha / (q^2 value); alpha / value when q = 0.
double lsi_constant(const SampledCurve& curve, double q);

// ---- extremal constructions -----------------------------------------------

enum class ExtremalVariant { conditional_typical, product, dirac_mixture };

struct ExtremalSpec {
  std::vector<double> first;   // Q on X
  std::vector<double> second;  // R on X
  double lambda = 1.0;
  double epsilon = 0.1;
  int n = 1;
  ExtremalVariant variant = ExtremalVariant::conditional_typical;
  double beta = 0.1;  // mass exponent of the point mass (dirac_mixture only)
};

// Sequences whose empirical law is within relative epsilon of q.
bool is_typical(std::span<const int> counts, int n, std::span<const double> q, double epsilon);

// Q_{X^n} / pi^n for the requested construction.
NonnegFunction build_extremal(const ExtremalSpec& spec, const Semigroup& s);

struct ExtremalReport {
  double ent_rate;
  double dirichlet_rate;
};

// Rates of f = (Q_{X^n} / pi^n)^{1/q}.
ExtremalReport extremal_report(const ExtremalSpec& spec, const Semigroup& s, double p, double q);

// Index of the smallest entry of pi (first one on ties).
int dirac_atom(const Semigroup& s);

}  // namespace rsobolev
