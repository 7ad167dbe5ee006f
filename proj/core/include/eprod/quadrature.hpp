#pragma once

// Gauss-Hermite quadrature at arbitrary precision, used as an independent
// oracle for the closed-form Hermite coefficients.

#include <functional>
#include <memory>
#include <vector>

#include "eprod/real.hpp"

namespace eprod {

using RealFunction = std::function<Real(const Real&)>;

/// Nodes and weights for int g(t) exp(-t^2) dt ~ sum w_i g(t_i).
class GaussHermiteRule {
 public:
  /// Cached per (nodes, bits); safe to call from several threads.
  static std::shared_ptr<const GaussHermiteRule> get(unsigned nodes, Bits bits);

  GaussHermiteRule(unsigned nodes, Bits bits);

  unsigned size() const { return static_cast<unsigned>(nodes_.size()); }
  Bits bits() const { return bits_; }
  const std::vector<Real>& nodes() const { return nodes_; }
  const std::vector<Real>& weights() const { return weights_; }

  Real integrate(const RealFunction& g) const;

 private:
  Bits bits_;
  std::vector<Real> nodes_;
  std::vector<Real> weights_;
};

/// e_n(x) exp(x^2/2) for n = 0..n_max, i.e. the normalized Hermite
/// polynomials without the Gaussian factor.
std::vector<Real> normalized_hermite_polynomials(unsigned long n_max, const Real& x);

/// int f(x) e_n(x) dx with the substitution x = sqrt(2) t. Throws
/// std::domain_error on a non-finite sample or an integrand that has not
/// decayed at the outermost nodes.
Real quadrature_coeff(const RealFunction& f, unsigned long n, unsigned nodes, Bits bits);
/// Same for every n <= n_max, sharing the samples.
std::vector<Real> quadrature_coeffs(const RealFunction& f, unsigned long n_max, unsigned nodes, Bits bits);

}  // namespace eprod
