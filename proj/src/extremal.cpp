#include "rsobolev/errors.hpp"
#include "rsobolev/sobolev.hpp"

#include <cmath>
#include <functional>

namespace rsobolev {

namespace {

void check_distribution(const std::vector<double>& d, int k, const char* name) {
  if (static_cast<int>(d.size()) != k)
    throw ValidationError(std::string(name) + " must have one weight per state");
  Distribution check(d);  // throws on bad weights
}

// Probability that an i.i.d. q-sequence of length m is typical, summed over
// type classes.
double typical_probability(const std::vector<double>& q, int m, double epsilon) {
  const std::size_t k = q.size();
  std::vector<int> c(k, 0);
  double total = 0.0;
  std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
    if (pos + 1 == k) {
      c[pos] = left;
      if (!is_typical(c, m, q, epsilon)) return;
      double lp = std::lgamma(m + 1.0);
      for (std::size_t a = 0; a < k; ++a) {
        if (c[a] == 0) continue;
        if (q[a] <= 0.0) return;
        lp += c[a] * std::log(q[a]) - std::lgamma(c[a] + 1.0);
      }
      total += std::exp(lp);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      c[pos] = v;
      rec(pos + 1, left - v);
    }
  };
  rec(0, m);
  return total;
}

}  // namespace

bool is_typical(std::span<const int> counts, int n, std::span<const double> q, double epsilon) {
  for (std::size_t a = 0; a < q.size(); ++a) {
    const double t = static_cast<double>(counts[a]) / n;
    if (std::abs(t - q[a]) > epsilon * q[a] + 1e-12) return false;
  }
  return true;
}

int dirac_atom(const Semigroup& s) {
  const Eigen::VectorXd& pi = s.stationary();
  int z = 0;
  for (int x = 1; x < pi.size(); ++x)
    if (pi(x) < pi(z)) z = x;
  return z;
}

NonnegFunction build_extremal(const ExtremalSpec& spec, const Semigroup& s) {
  const int k = s.states();
  if (!(spec.lambda >= 0.0 && spec.lambda <= 1.0)) throw ValidationError("lambda must lie in [0, 1]");
  if (!(spec.epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  const ProductSpace space = make_product_space(k, spec.n);
  const int n = spec.n;
  const Eigen::VectorXd& pi = s.stationary();
  std::vector<double> pis(pi.data(), pi.data() + pi.size());
  std::vector<double> out(space.size(), 0.0);

  if (spec.variant == ExtremalVariant::dirac_mixture) {
    if (!(spec.beta > 0.0)) throw ValidationError("mass exponent beta must be positive");
    const double pt = typical_probability(pis, n, spec.epsilon);
    if (!(pt > 0.0)) throw ValidationError("typical set is empty for this epsilon and n");
    const double point_mass = std::exp(-n * spec.beta);
    const std::vector<double> w = product_measure(pi, n);
    std::vector<int> counts(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < out.size(); ++i) {
      std::fill(counts.begin(), counts.end(), 0);
      std::size_t idx = i;
      for (int c = 0; c < n; ++c, idx /= static_cast<std::size_t>(k)) ++counts[idx % static_cast<std::size_t>(k)];
      if (is_typical(counts, n, pis, spec.epsilon)) out[i] = (1.0 - point_mass) / pt;
    }
    const int z = dirac_atom(s);
    std::vector<int> zt(static_cast<std::size_t>(n), z);
    const std::size_t zi = space.index(zt);
    out[zi] += point_mass / w[zi];
    return NonnegFunction(space, std::move(out));
  }

  check_distribution(spec.first, k, "Q");
  check_distribution(spec.second, k, "R");
  const int head = static_cast<int>(std::floor(spec.lambda * n));
  const int tail = n - head;
  const bool conditional = spec.variant == ExtremalVariant::conditional_typical;
  double ph = 1.0, pt = 1.0;
  if (conditional) {
    if (head > 0) ph = typical_probability(spec.first, head, spec.epsilon);
    if (tail > 0) pt = typical_probability(spec.second, tail, spec.epsilon);
    if (!(ph > 0.0) || !(pt > 0.0)) throw ValidationError("typical set is empty for this epsilon and n");
  }

  std::vector<int> ch(static_cast<std::size_t>(k)), ct(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::vector<int> x = space.tuple(i);
    std::fill(ch.begin(), ch.end(), 0);
    std::fill(ct.begin(), ct.end(), 0);
    double ratio = 1.0;
    for (int c = 0; c < n; ++c) {
      const int a = x[static_cast<std::size_t>(c)];
      if (c < head) {
        ++ch[static_cast<std::size_t>(a)];
        ratio *= spec.first[static_cast<std::size_t>(a)] / pis[static_cast<std::size_t>(a)];
      } else {
        ++ct[static_cast<std::size_t>(a)];
        ratio *= spec.second[static_cast<std::size_t>(a)] / pis[static_cast<std::size_t>(a)];
      }
    }
    if (conditional) {
      if (head > 0 && !is_typical(ch, head, spec.first, spec.epsilon)) ratio = 0.0;
      if (tail > 0 && !is_typical(ct, tail, spec.second, spec.epsilon)) ratio = 0.0;
      ratio /= ph * pt;
    }
    out[i] = ratio;
  }
  return NonnegFunction(space, std::move(out));
}

ExtremalReport extremal_report(const ExtremalSpec& spec, const Semigroup& s, double p, double q) {
  if (!(q > 0.0) || std::isinf(q)) throw ValidationError("q must be positive and finite");
  const NonnegFunction d = build_extremal(spec, s);
  const int n = spec.n;
  const std::vector<double> w = product_measure(s.stationary(), n);
  std::vector<double> f(d.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::pow(d[i], 1.0 / q);
  const double ent_rate = ent_pq(f, w, p, q) / n;

  double rate;
  if (q == 1.0) {
    if (!d.strictly_positive()) {
      rate = kInf;
    } else {
      std::vector<double> lg(d.size());
      for (std::size_t i = 0; i < lg.size(); ++i) lg[i] = std::log(d[i]);
      rate = dirichlet_form(s, d.space(), d.values(), lg) / n;
    }
  } else {
    const NonnegFunction fn(d.space(), f);
    rate = normalized_dirichlet_form(s, fn, q) / ((q - 1.0) * n);
  }
  return {ent_rate, rate};
}

}  // namespace rsobolev
