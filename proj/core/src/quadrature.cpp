#include "eprod/quadrature.hpp"

#include "eprod/exact.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace eprod {

namespace {

// Number of eigenvalues below x of the Jacobi matrix of the Hermite weight
// (zero diagonal, off-diagonal sqrt(k/2)), by the Sturm sequence.
unsigned eigenvalues_below(unsigned n, double x) {
  unsigned count = 0;
  double d = -x;
  if (d < 0) ++count;
  for (unsigned k = 1; k < n; ++k) {
    if (d == 0) d = 1e-300;
    d = -x - (k / 2.0) / d;
    if (d < 0) ++count;
  }
  return count;
}

// Double-precision roots of H_n in descending order.
std::vector<double> hermite_root_seeds(unsigned n) {
  const double bound = std::sqrt(2.0 * n + 1) + 1;
  std::vector<double> roots;
  for (unsigned i = 0; i < (n + 1) / 2; ++i) {
    // The (n - i)-th smallest eigenvalue.
    const unsigned index = n - 1 - i;
    double lo = 0 - 1e-12;
    double hi = bound;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (eigenvalues_below(n, mid) > index) hi = mid;
      else lo = mid;
    }
    roots.push_back(0.5 * (lo + hi));
  }
  return roots;
}

}  // namespace

std::shared_ptr<const GaussHermiteRule> GaussHermiteRule::get(unsigned nodes, Bits bits) {
  static std::mutex mutex;
  static std::map<std::pair<unsigned, Bits>, std::shared_ptr<const GaussHermiteRule>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find({nodes, bits}); it != cache.end()) return it->second;
  }
  auto rule = std::make_shared<const GaussHermiteRule>(nodes, bits);
  std::lock_guard lock(mutex);
  return cache.try_emplace({nodes, bits}, std::move(rule)).first->second;
}

GaussHermiteRule::GaussHermiteRule(unsigned n, Bits bits) : bits_(bits) {
  if (n == 0) throw std::invalid_argument("Gauss-Hermite rule needs at least one node");
  const Real pi_m4 = Real(1, bits) / sqrt(sqrt(Real::pi(bits)));
  const unsigned half = (n + 1) / 2;
  const std::vector<double> guesses = hermite_root_seeds(n);
  std::vector<Real> positive;
  std::vector<Real> positive_weights;

  std::vector<Real> up(n + 1, Real(bits));
  std::vector<Real> down(n + 1, Real(bits));
  for (unsigned j = 1; j <= n; ++j) {
    up[j] = sqrt(Real(Rational(2, j), bits));
    down[j] = sqrt(Real(Rational(j - 1, j), bits));
  }
  // Returns p_{n-1}(x) and sets p to p_n(x).
  auto evaluate = [&](const Real& x, Real& p) {
    Real p1 = pi_m4;
    Real p2(bits);
    for (unsigned j = 1; j <= n; ++j) {
      Real p3 = std::move(p2);
      p2 = p1;
      p1 = x * up[j] * p2;
      if (j > 1) p1 -= down[j] * p3;
    }
    p = std::move(p1);
    return p2;
  };

  const Real two_n_root = sqrt(Real(2L * n, bits));
  const Real tolerance = Real::pow2(-static_cast<long>(bits) + 4, bits);
  for (unsigned i = 0; i < half; ++i) {
    Real x = Real::from_double(guesses[i], bits);
    Real p(bits);
    for (int it = 0; it < 64; ++it) {
      const Real pm1 = evaluate(x, p);
      const Real dz = p / (two_n_root * pm1);
      x -= dz;
      if (it > 0 && abs(dz) <= tolerance * max(abs(x), Real(1, bits))) break;
    }
    const Real pp = two_n_root * evaluate(x, p);
    positive.push_back(x);
    positive_weights.push_back(Real(2, bits) / (pp * pp));
  }

  // Ascending order: negatives first.
  for (unsigned i = 0; i < half; ++i) {
    if (n % 2 == 1 && i == half - 1) continue;  // the zero node is added once below
    nodes_.push_back(-positive[i]);
    weights_.push_back(positive_weights[i]);
  }
  for (unsigned i = half; i-- > 0;) {
    if (n % 2 == 1 && i == half - 1) {
      nodes_.push_back(Real(bits));
    } else {
      nodes_.push_back(positive[i]);
    }
    weights_.push_back(positive_weights[i]);
  }
}

Real GaussHermiteRule::integrate(const RealFunction& g) const {
  Real sum(bits_);
  for (std::size_t i = 0; i < nodes_.size(); ++i) sum.add_product(weights_[i], g(nodes_[i]));
  return sum;
}

std::vector<Real> normalized_hermite_polynomials(unsigned long n_max, const Real& x) {
  const Bits bits = x.bits();
  std::vector<Real> q;
  q.reserve(n_max + 1);
  q.push_back(Real(1, bits) / sqrt(sqrt(Real::pi(bits))));
  if (n_max >= 1) q.push_back(sqrt(Real(2, bits)) * x * q[0]);
  for (unsigned long k = 1; k < n_max; ++k) {
    Real next = sqrt(Real(Rational(2, k + 1), bits)) * x * q[k];
    next -= sqrt(Real(Rational(k, k + 1), bits)) * q[k - 1];
    q.push_back(std::move(next));
  }
  return q;
}

std::vector<Real> quadrature_coeffs(const RealFunction& f, unsigned long n_max, unsigned nodes, Bits bits) {
  const auto rule = GaussHermiteRule::get(nodes, bits);
  const Real root_two = sqrt(Real(2, bits));
  std::vector<Real> out(n_max + 1, Real(bits));
  Real largest(bits), outermost(bits);
  const unsigned last = rule->size() - 1;
  for (unsigned i = 0; i < rule->size(); ++i) {
    const Real x = root_two * rule->nodes()[i];
    const Real sample = f(x);
    if (!sample.is_finite()) throw std::domain_error("non-finite sample at x = " + x.to_string(20));
    const Real weighted = rule->weights()[i] * sample;
    largest = max(largest, abs(weighted));
    if (i == 0 || i == last) outermost = max(outermost, abs(weighted));
    const auto q = normalized_hermite_polynomials(n_max, x);
    for (unsigned long n = 0; n <= n_max; ++n) out[n].add_product(weighted, q[n]);
  }
  // The integrand must have decayed at the outermost nodes.
  if (!largest.is_zero() && outermost > largest * Real::pow2(-static_cast<long>(bits / 2), bits))
    throw std::domain_error("integrand does not decay within " + std::to_string(rule->size()) + " nodes");
  for (auto& v : out) v *= root_two;
  return out;
}

Real quadrature_coeff(const RealFunction& f, unsigned long n, unsigned nodes, Bits bits) {
  return quadrature_coeffs(f, n, nodes, bits)[n];
}

}  // namespace eprod
