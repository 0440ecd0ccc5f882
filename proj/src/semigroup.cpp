#include "rsobolev/semigroup.hpp"

#include "rsobolev/errors.hpp"

#include <cmath>
#include <string>

namespace rsobolev {

namespace {

void require_same_space(const NonnegFunction& f, const NonnegFunction& g) {
  if (f.space().alphabet != g.space().alphabet || f.dimension() != g.dimension())
    throw ValidationError("functions live on different product spaces");
}

void require_matching(const Semigroup& s, const ProductSpace& space, std::size_t fs,
                      std::size_t gs) {
  if (space.alphabet != s.states())
    throw ValidationError("function alphabet does not match the semigroup");
  if (fs != space.size() || gs != space.size())
    throw ValidationError("function length does not match the product space");
}

// 0^0 = 1 and 0^e = 0 for e > 0; negative exponents need positive input.
double guarded_pow(double x, double e) {
  if (x == 0.0) {
    if (e == 0.0) return 1.0;
    if (e > 0.0) return 0.0;
    throw ValidationError("zero entry raised to a negative power");
  }
  return std::pow(x, e);
}

}  // namespace

Semigroup validate_semigroup(const Eigen::MatrixXd& generator,
                             std::optional<Eigen::VectorXd> stationary) {
  const Eigen::Index k = generator.rows();
  if (k != generator.cols()) throw ValidationError("generator must be square");
  if (k < 2) throw ValidationError("generator must have at least two states");
  if (!generator.allFinite()) throw ValidationError("generator has non-finite entries");

  const double scale = std::max(1.0, generator.cwiseAbs().maxCoeff());
  for (Eigen::Index x = 0; x < k; ++x) {
    for (Eigen::Index y = 0; y < k; ++y) {
      if (std::abs(generator(x, y) - generator(y, x)) > tol::kStructural * scale)
        throw ValidationError("generator is not symmetric");
      if (x != y && generator(x, y) < 0.0)
        throw ValidationError("generator has a negative off-diagonal entry");
    }
    if (std::abs(generator.row(x).sum()) > tol::kStructural * scale)
      throw ValidationError("generator row " + std::to_string(x) + " does not sum to zero");
  }

  Eigen::VectorXd pi;
  if (stationary) {
    pi = *stationary;
    if (pi.size() != k) throw ValidationError("stationary vector has the wrong length");
  } else {
    // Kernel of L^T; for symmetric L the uniform vector lies in it, but the
    // kernel may be larger (reducible chains), so prefer uniform when valid.
    pi = Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k));
    if ((pi.transpose() * generator).cwiseAbs().maxCoeff() > tol::kStationary) {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(generator.transpose());
      Eigen::MatrixXd kernel = lu.kernel();
      if (kernel.cols() != 1)
        throw ValidationError("no unique stationary vector; pass one explicitly");
      pi = kernel.col(0);
      if (pi.sum() < 0) pi = -pi;
      pi /= pi.sum();
    }
  }
  if (!pi.allFinite() || pi.minCoeff() <= 0.0)
    throw ValidationError("no strictly positive stationary vector");
  if (std::abs(pi.sum() - 1.0) > tol::kStructural)
    throw ValidationError("stationary vector does not sum to one");
  if ((pi.transpose() * generator).cwiseAbs().maxCoeff() > tol::kStationary * scale)
    throw ValidationError("stationary vector is not invariant under the generator");

  Semigroup s;
  s.generator_ = 0.5 * (generator + generator.transpose());
  s.stationary_ = pi;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.generator_);
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition of generator failed");
  s.eigenvalues_ = es.eigenvalues();
  s.eigenvectors_ = es.eigenvectors();
  return s;
}

Semigroup binary_semigroup() {
  Eigen::MatrixXd l(2, 2);
  l << -0.5, 0.5, 0.5, -0.5;
  return validate_semigroup(l);
}

std::size_t ProductSpace::size() const {
  std::size_t n = 1;
  for (int i = 0; i < dimension; ++i) n *= static_cast<std::size_t>(alphabet);
  return n;
}

std::size_t ProductSpace::stride(int coord) const {
  std::size_t s = 1;
  for (int i = coord + 1; i < dimension; ++i) s *= static_cast<std::size_t>(alphabet);
  return s;
}

int ProductSpace::digit(std::size_t index, int coord) const {
  return static_cast<int>((index / stride(coord)) % static_cast<std::size_t>(alphabet));
}

std::vector<int> ProductSpace::tuple(std::size_t index) const {
  std::vector<int> t(static_cast<std::size_t>(dimension));
  for (int k = dimension - 1; k >= 0; --k) {
    t[static_cast<std::size_t>(k)] = static_cast<int>(index % static_cast<std::size_t>(alphabet));
    index /= static_cast<std::size_t>(alphabet);
  }
  return t;
}

std::size_t ProductSpace::index(std::span<const int> t) const {
  std::size_t idx = 0;
  for (int d : t) idx = idx * static_cast<std::size_t>(alphabet) + static_cast<std::size_t>(d);
  return idx;
}

ProductSpace make_product_space(int alphabet, int dimension) {
  if (alphabet < 1) throw ValidationError("alphabet must be nonempty");
  if (dimension < 1) throw ValidationError("dimension must be at least 1");
  double total = std::pow(static_cast<double>(alphabet), dimension);
  if (total > static_cast<double>(kMaxProductSize))
    throw ValidationError("product space exceeds the 2^20 enumeration budget");
  return ProductSpace{alphabet, dimension};
}

NonnegFunction::NonnegFunction(ProductSpace space, std::vector<double> values)
    : space_(space), values_(std::move(values)) {
  if (values_.size() != space_.size())
    throw ValidationError("function length does not match |X|^n");
  bool any_positive = false;
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) throw ValidationError("function must be finite and nonnegative");
    any_positive = any_positive || v > 0.0;
  }
  if (!any_positive) throw ValidationError("function is identically zero");
}

NonnegFunction NonnegFunction::constant(ProductSpace space, double c) {
  return NonnegFunction(space, std::vector<double>(space.size(), c));
}

bool NonnegFunction::strictly_positive() const {
  for (double v : values_)
    if (v <= 0.0) return false;
  return true;
}

std::vector<double> product_measure(const Eigen::VectorXd& pi, int n) {
  ProductSpace space = make_product_space(static_cast<int>(pi.size()), n);
  std::vector<double> w(space.size(), 1.0);
  const std::size_t k = static_cast<std::size_t>(pi.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    std::size_t idx = i;
    double prod = 1.0;
    for (int c = 0; c < n; ++c) {
      prod *= pi(static_cast<Eigen::Index>(idx % k));
      idx /= k;
    }
    w[i] = prod;
  }
  return w;
}

Eigen::MatrixXd heat_group(const Semigroup& s, double t) {
  const Eigen::VectorXd expo = (t * s.eigenvalues().array()).exp().matrix();
  return s.eigenvectors() * expo.asDiagonal() * s.eigenvectors().transpose();
}

Eigen::MatrixXd heat_operator(const Semigroup& s, double t) {
  if (!(t >= 0.0)) throw ValidationError("heat operator needs t >= 0");
  return heat_group(s, t);
}

std::vector<double> apply_on_coordinate(const Eigen::MatrixXd& m, const ProductSpace& space,
                                        std::span<const double> f, int coord) {
  const std::size_t k = static_cast<std::size_t>(space.alphabet);
  const std::size_t stride = space.stride(coord);
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const std::size_t xk = (i / stride) % k;
    const std::size_t base = i - xk * stride;
    double acc = 0.0;
    for (std::size_t y = 0; y < k; ++y)
      acc += m(static_cast<Eigen::Index>(xk), static_cast<Eigen::Index>(y)) * f[base + y * stride];
    out[i] = acc;
  }
  return out;
}

std::vector<double> apply_generator(const Semigroup& s, const ProductSpace& space,
                                    std::span<const double> f) {
  require_matching(s, space, f.size(), f.size());
  std::vector<double> out(f.size(), 0.0);
  for (int c = 0; c < space.dimension; ++c) {
    std::vector<double> part = apply_on_coordinate(s.generator(), space, f, c);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += part[i];
  }
  return out;
}

std::vector<double> apply_heat(const Semigroup& s, const ProductSpace& space,
                               std::span<const double> f, double t) {
  require_matching(s, space, f.size(), f.size());
  const Eigen::MatrixXd m = heat_group(s, t);
  std::vector<double> cur(f.begin(), f.end());
  for (int c = 0; c < space.dimension; ++c) cur = apply_on_coordinate(m, space, cur, c);
  return cur;
}

std::vector<double> carre_du_champ(const Semigroup& s, const ProductSpace& space,
                                   std::span<const double> f, std::span<const double> g) {
  require_matching(s, space, f.size(), g.size());
  const std::size_t k = static_cast<std::size_t>(space.alphabet);
  const Eigen::MatrixXd& l = s.generator();
  std::vector<double> out(f.size(), 0.0);
  for (int c = 0; c < space.dimension; ++c) {
    const std::size_t stride = space.stride(c);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const std::size_t xk = (i / stride) % k;
      const std::size_t base = i - xk * stride;
      double acc = 0.0;
      for (std::size_t y = 0; y < k; ++y) {
        if (y == xk) continue;
        const std::size_t j = base + y * stride;
        acc += l(static_cast<Eigen::Index>(xk), static_cast<Eigen::Index>(y)) * (f[j] - f[i]) *
               (g[j] - g[i]);
      }
      out[i] += 0.5 * acc;
    }
  }
  return out;
}

std::vector<double> carre_du_champ(const Semigroup& s, const NonnegFunction& f,
                                   const NonnegFunction& g) {
  require_same_space(f, g);
  return carre_du_champ(s, f.space(), f.values(), g.values());
}

double dirichlet_form(const Semigroup& s, const ProductSpace& space, std::span<const double> f,
                      std::span<const double> g) {
  const std::vector<double> gamma = carre_du_champ(s, space, f, g);
  const std::vector<double> w = product_measure(s.stationary(), space.dimension);
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * gamma[i];
  return acc;
}

double dirichlet_form(const Semigroup& s, const NonnegFunction& f, const NonnegFunction& g) {
  require_same_space(f, g);
  return dirichlet_form(s, f.space(), f.values(), g.values());
}

double dirichlet_form_by_generator(const Semigroup& s, const ProductSpace& space,
                                   std::span<const double> f, std::span<const double> g) {
  require_matching(s, space, f.size(), g.size());
  const std::vector<double> lf = apply_generator(s, space, f);
  const std::vector<double> w = product_measure(s.stationary(), space.dimension);
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * lf[i] * g[i];
  return -acc;
}

double normalized_dirichlet_form(const Semigroup& s, const NonnegFunction& f, double q) {
  if (q < 1.0 && !f.strictly_positive())
    throw ValidationError("q < 1 needs a strictly positive function");
  std::vector<double> g(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) g[i] = guarded_pow(f[i], q - 1.0);
  const std::vector<double> w = product_measure(s.stationary(), f.dimension());
  double denom = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) denom += w[i] * f[i] * g[i];
  if (!(denom > 0.0)) throw ValidationError("<f, f^{q-1}> vanishes");
  return dirichlet_form(s, f.space(), f.values(), g) / denom;
}

DerivativeCheck derivative_check(const Semigroup& s, const NonnegFunction& f, double q, double h) {
  if (!(h > 0.0 && h <= 1e-4)) throw ValidationError("step h must lie in (0, 1e-4]");
  if (!(q > 1.0)) throw ValidationError("derivative check needs q > 1");
  if (!f.strictly_positive()) throw ValidationError("derivative check needs f > 0");
  if (f.space().alphabet != s.states())
    throw ValidationError("function alphabet does not match the semigroup");

  const int n = f.dimension();
  const std::vector<double> w = product_measure(s.stationary(), n);
  // -(1/n) ln ||T_t f||_q; nullopt if T_t f leaves the positive cone.
  auto phi = [&](double t) -> std::optional<double> {
    const std::vector<double> tf = apply_heat(s, f.space(), f.values(), t);
    double acc = 0.0;
    for (std::size_t i = 0; i < tf.size(); ++i) {
      if (tf[i] <= 0.0) return std::nullopt;
      acc += w[i] * std::pow(tf[i], q);
    }
    return -std::log(acc) / (q * n);
  };

  const double p0 = *phi(0.0);
  const auto pp = phi(h);
  const auto pm = phi(-h);
  double fd;
  if (pm) {
    fd = (*pp - *pm) / (2.0 * h);
  } else {
    // Backward step is not positive; fall back to the one-sided second-order stencil.
    const auto p2 = phi(2.0 * h);
    fd = (-3.0 * p0 + 4.0 * *pp - *p2) / (2.0 * h);
  }
  return DerivativeCheck{fd, normalized_dirichlet_form(s, f, q) / n};
}

}  // namespace rsobolev
