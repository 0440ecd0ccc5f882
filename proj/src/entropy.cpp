#include "rsobolev/entropy.hpp"

#include "rsobolev/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rsobolev {

namespace {

void check_pair(std::span<const double> f, std::span<const double> w) {
  if (f.size() != w.size()) throw ValidationError("function and measure lengths differ");
  bool any = false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!(f[i] >= 0.0) || !std::isfinite(f[i])) throw ValidationError("function must be finite and nonnegative");
    any = any || (f[i] > 0.0 && w[i] > 0.0);
  }
  if (!any) throw ValidationError("function vanishes almost surely");
}

void check_order(double v, const char* name) {
  if (std::isnan(v) || v < 0.0) throw ValidationError(std::string(name) + " must lie in [0, inf]");
}

double log_sum_exp(const std::vector<double>& terms) {
  double m = -kInf;
  for (double t : terms) m = std::max(m, t);
  if (m == -kInf) return -kInf;
  if (m == kInf) return kInf;
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - m);
  return m + std::log(acc);
}

// -ln w(f > 0).
double support_entropy(std::span<const double> f, std::span<const double> w) {
  double mass = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] > 0.0) mass += w[i];
  return -std::log(std::min(mass, 1.0));
}

double log_sup(std::span<const double> f, std::span<const double> w) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (w[i] > 0.0) m = std::max(m, f[i]);
  return std::log(m);
}

}  // namespace

Distribution::Distribution(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw ValidationError("empty distribution");
  double total = 0.0;
  for (double v : weights_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("distribution weights must be nonnegative");
    total += v;
  }
  if (std::abs(total - 1.0) > tol::kStructural) throw ValidationError("distribution does not sum to one");
}

Distribution Distribution::normalized(std::vector<double> weights) {
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0) || !std::isfinite(total)) throw ValidationError("weights have no positive mass");
  for (double& v : weights) v /= total;
  return Distribution(std::move(weights));
}

double log_moment(std::span<const double> f, std::span<const double> w, double p) {
  std::vector<double> terms;
  terms.reserve(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (w[i] <= 0.0) continue;
    if (f[i] > 0.0)
      terms.push_back(std::log(w[i]) + p * std::log(f[i]));
    else if (p == 0.0)
      terms.push_back(std::log(w[i]));
  }
  return log_sum_exp(terms);
}

double ent(std::span<const double> f, std::span<const double> w) {
  check_pair(f, w);
  double m = 0.0, flogf = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    m += w[i] * f[i];
    if (f[i] > 0.0) flogf += w[i] * f[i] * std::log(f[i]);
  }
  return std::max(0.0, flogf - m * std::log(m));
}

double ent(const NonnegFunction& f, const Eigen::VectorXd& pi) {
  const std::vector<double> w = product_measure(pi, f.dimension());
  return ent(f.values(), w);
}

double normalized_ent(std::span<const double> f, std::span<const double> w) {
  const double e = ent(f, w);
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) m += w[i] * f[i];
  return e / m;
}

double ent_pq(std::span<const double> f, std::span<const double> w, double p, double q) {
  check_pair(f, w);
  check_order(p, "p");
  check_order(q, "q");
  if (p == 0.0 || q == 0.0) return support_entropy(f, w);
  if (std::isinf(p) && std::isinf(q)) {
    // Both orders infinite: -ln w(f = max f).
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
      if (w[i] > 0.0) m = std::max(m, f[i]);
    double mass = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
      if (w[i] > 0.0 && f[i] == m) mass += w[i];
    return -std::log(std::min(mass, 1.0));
  }
  if (std::isinf(p) || std::isinf(q)) {
    const double r = std::isinf(p) ? q : p;
    // r ln(||f||_inf / ||f||_r) = r ln max f - ln E f^r.
    return std::max(0.0, r * log_sup(f, w) - log_moment(f, w, r));
  }
  if (p == q) {
    // Ent(f^q)/E f^q as the divergence of the tilted law from w.
    const double lm = log_moment(f, w, q);
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f[i] <= 0.0 || w[i] <= 0.0) continue;
      const double lr = q * std::log(f[i]) - lm;
      acc += w[i] * std::exp(lr) * lr;
    }
    return std::max(0.0, acc);
  }
  const double lp = log_moment(f, w, p) / p;
  const double lq = log_moment(f, w, q) / q;
  return std::max(0.0, p * q / (p - q) * (lp - lq));
}

double ent_pq(const NonnegFunction& f, const Eigen::VectorXd& pi, double p, double q) {
  const std::vector<double> w = product_measure(pi, f.dimension());
  return ent_pq(f.values(), w, p, q);
}

double renyi_divergence(std::span<const double> q, std::span<const double> ref, double gamma) {
  if (q.size() != ref.size()) throw ValidationError("distribution lengths differ");
  check_order(gamma, "gamma");
  bool dominated = true;
  for (std::size_t i = 0; i < q.size(); ++i)
    if (q[i] > 0.0 && ref[i] <= 0.0) dominated = false;

  if (gamma == 0.0) {
    double mass = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
      if (q[i] > 0.0) mass += ref[i];
    return mass > 0.0 ? -std::log(std::min(mass, 1.0)) : kInf;
  }
  if (gamma >= 1.0 && !dominated) return kInf;
  if (gamma == 1.0) {
    double acc = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
      if (q[i] > 0.0) acc += q[i] * std::log(q[i] / ref[i]);
    return std::max(0.0, acc);
  }
  if (std::isinf(gamma)) {
    double m = -kInf;
    for (std::size_t i = 0; i < q.size(); ++i)
      if (q[i] > 0.0) m = std::max(m, std::log(q[i]) - std::log(ref[i]));
    return std::max(0.0, m);
  }
  std::vector<double> terms;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] <= 0.0 || ref[i] <= 0.0) continue;
    terms.push_back(gamma * std::log(q[i]) + (1.0 - gamma) * std::log(ref[i]));
  }
  const double ls = log_sum_exp(terms);
  if (ls == -kInf) return kInf;
  return std::max(0.0, ls / (gamma - 1.0));
}

double renyi_divergence(const Distribution& q, std::span<const double> ref, double gamma) {
  return renyi_divergence(q.weights(), ref, gamma);
}

Distribution tilted_distribution(std::span<const double> f, std::span<const double> w, double q) {
  check_pair(f, w);
  if (!(q > 0.0) || std::isinf(q)) throw ValidationError("tilting order must be positive and finite");
  const double lm = log_moment(f, w, q);
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] > 0.0 && w[i] > 0.0) out[i] = std::exp(std::log(w[i]) + q * std::log(f[i]) - lm);
  return Distribution::normalized(std::move(out));
}

}  // namespace rsobolev
