#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace rsobolev {

// Minimize objective(Q) over probability vectors Q subject to
// constraint(Q) >= level. Points that violate the constraint are moved
// outward along the ray from the centre of their face until they satisfy it,
// so every evaluated point is feasible and the result is an upper bound.
struct SimplexProblem {
  std::size_t atoms = 0;
  std::vector<double> center;  // strictly positive reference point (pi)
  std::function<double(std::span<const double>)> objective;
  std::function<double(std::span<const double>)> constraint;
  double level = 0.0;
  bool interior_only = false;  // objective is +inf on faces
};

struct SimplexSearchConfig {
  int grid_divisions = 400;
  std::size_t max_grid_points = 250'000;
  int polish_starts = 3;
  int polish_iterations = 4000;
  int random_starts = 16;  // only used when the grid is skipped
  std::uint64_t seed = 0;
  bool force_random = false;
};

struct SimplexSearchResult {
  double value;
  std::vector<double> point;
  bool used_grid;
  int divisions;  // grid step actually used (0 if none)
};

SimplexSearchResult minimize_on_simplex(const SimplexProblem& problem,
                                        const SimplexSearchConfig& config);

// Number of compositions of `divisions` into `atoms` parts, saturating.
std::size_t simplex_grid_size(std::size_t atoms, int divisions);

// Nelder-Mead on R^d with adaptive coefficients; +inf values are allowed.
struct NelderMeadResult {
  std::vector<double> x;
  double value;
};
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> start, double step, int max_iterations,
                             double ftol = 1e-15, double xtol = 1e-14);

}  // namespace rsobolev
