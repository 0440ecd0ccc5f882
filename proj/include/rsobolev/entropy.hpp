#pragma once

#include "rsobolev/semigroup.hpp"

#include <limits>
#include <span>
#include <vector>

namespace rsobolev {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Probability vector on X^n.
class Distribution {
 public:
  explicit Distribution(std::vector<double> weights);
  // Rescales nonnegative weights to sum one.
  static Distribution normalized(std::vector<double> weights);

  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }

 private:
  std::vector<double> weights_;
};

// Every function below takes the reference measure as a weight vector over the
// same index set as f (use product_measure for X^n).

double ent(std::span<const double> f, std::span<const double> weights);
double ent(const NonnegFunction& f, const Eigen::VectorXd& pi);

// Ent(f) / E f.
double normalized_ent(std::span<const double> f, std::span<const double> weights);

// Two-parameter entropy; p and q range over [0, +inf].
double ent_pq(std::span<const double> f, std::span<const double> weights, double p, double q);
double ent_pq(const NonnegFunction& f, const Eigen::VectorXd& pi, double p, double q);

// D_gamma(Q || ref) for gamma in [0, +inf]; +inf when Q is not dominated by ref
// and gamma >= 1.
double renyi_divergence(std::span<const double> q, std::span<const double> ref, double gamma);
double renyi_divergence(const Distribution& q, std::span<const double> ref, double gamma);

// Q = f^q ref / E[f^q].
Distribution tilted_distribution(std::span<const double> f, std::span<const double> weights,
                                 double q);

// ln E_w[f^p] over the support of f, via log-sum-exp.
double log_moment(std::span<const double> f, std::span<const double> weights, double p);

}  // namespace rsobolev
