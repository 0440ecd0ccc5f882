#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace rsobolev {

namespace tol {
inline constexpr double kStructural = 1e-12;
inline constexpr double kStationary = 1e-10;
inline constexpr double kIdentity = 1e-10;
inline constexpr double kFiniteDifference = 1e-6;
}  // namespace tol

// Largest dense product space we are willing to materialize.
inline constexpr std::size_t kMaxProductSize = std::size_t{1} << 20;

// Symmetric generator L with its stationary law. Immutable once validated;
// the spectral decomposition is computed once and reused by heat operators.
class Semigroup {
 public:
  int states() const { return static_cast<int>(generator_.rows()); }
  const Eigen::MatrixXd& generator() const { return generator_; }
  const Eigen::VectorXd& stationary() const { return stationary_; }
  double min_stationary() const { return stationary_.minCoeff(); }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }

 private:
  friend Semigroup validate_semigroup(const Eigen::MatrixXd&, std::optional<Eigen::VectorXd>);
  Semigroup() = default;

  Eigen::MatrixXd generator_;
  Eigen::VectorXd stationary_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
};

Semigroup validate_semigroup(const Eigen::MatrixXd& generator,
                             std::optional<Eigen::VectorXd> stationary = std::nullopt);

// Two-point chain with L(x,y) = 1{x != y} - 1/2 and uniform stationary law.
Semigroup binary_semigroup();

// Lexicographic indexing of X^n; coordinate 0 is the most significant digit.
struct ProductSpace {
  int alphabet = 2;
  int dimension = 1;

  std::size_t size() const;
  std::size_t stride(int coord) const;
  int digit(std::size_t index, int coord) const;
  std::vector<int> tuple(std::size_t index) const;
  std::size_t index(std::span<const int> tuple) const;
};

ProductSpace make_product_space(int alphabet, int dimension);

class NonnegFunction {
 public:
  NonnegFunction(ProductSpace space, std::vector<double> values);
  static NonnegFunction constant(ProductSpace space, double c);

  const ProductSpace& space() const { return space_; }
  int dimension() const { return space_.dimension; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  bool strictly_positive() const;

 private:
  ProductSpace space_;
  std::vector<double> values_;
};

// pi^{(x) n} on the lexicographic index.
std::vector<double> product_measure(const Eigen::VectorXd& pi, int n);

// e^{tL}; t must be nonnegative.
Eigen::MatrixXd heat_operator(const Semigroup& s, double t);

// e^{tL} for any real t. The generator is symmetric so the exponential exists
// for negative times too; only used where a two-sided difference is needed.
Eigen::MatrixXd heat_group(const Semigroup& s, double t);

// Applies a single-site matrix M along coordinate k:
// out(x) = sum_y M(x_k, y) f(x with x_k := y).
std::vector<double> apply_on_coordinate(const Eigen::MatrixXd& m, const ProductSpace& space,
                                        std::span<const double> f, int coord);

// L^{(+)n} f.
std::vector<double> apply_generator(const Semigroup& s, const ProductSpace& space,
                                    std::span<const double> f);

// T_t^{(x)n} f with T_t = heat_group(t).
std::vector<double> apply_heat(const Semigroup& s, const ProductSpace& space,
                               std::span<const double> f, double t);

std::vector<double> carre_du_champ(const Semigroup& s, const ProductSpace& space,
                                   std::span<const double> f, std::span<const double> g);
std::vector<double> carre_du_champ(const Semigroup& s, const NonnegFunction& f,
                                   const NonnegFunction& g);

// <Gamma(f, g)> under pi^n.
double dirichlet_form(const Semigroup& s, const ProductSpace& space, std::span<const double> f,
                      std::span<const double> g);
double dirichlet_form(const Semigroup& s, const NonnegFunction& f, const NonnegFunction& g);

// -<L f, g> under pi^n. Same value as dirichlet_form, computed the other way.
double dirichlet_form_by_generator(const Semigroup& s, const ProductSpace& space,
                                   std::span<const double> f, std::span<const double> g);

// E(f, f^{q-1}) / <f^q>.
double normalized_dirichlet_form(const Semigroup& s, const NonnegFunction& f, double q);

struct DerivativeCheck {
  double finite_difference;
  double analytic;
};

// d/dt of -(1/n) ln ||T_t f||_q at t = 0, numerically and in closed form.
DerivativeCheck derivative_check(const Semigroup& s, const NonnegFunction& f, double q, double h);

}  // namespace rsobolev
