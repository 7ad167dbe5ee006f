#include "eprod/hermite.hpp"

#include <map>
#include <stdexcept>
#include <vector>

namespace eprod {

ExactTerm hermite_at_zero(unsigned long n) {
  if (n % 2 == 1) return ExactTerm();
  const unsigned long l = n / 2;
  mpz_class v = factorial(2 * l) / factorial(l);
  if (l % 2 == 1) v = -v;
  return ExactTerm(Rational(v));
}

Real hermite_eval(unsigned long n, const Real& x) {
  Real previous(1, x.bits());
  if (n == 0) return previous;
  Real current = x * 2;
  for (unsigned long k = 1; k < n; ++k) {
    Real next = x * current;
    next *= 2;
    next -= previous * static_cast<long>(2 * k);
    previous = std::move(current);
    current = std::move(next);
  }
  return current;
}

Complex hermite_eval(unsigned long n, const Complex& x) {
  Complex previous(Real(1, x.bits()));
  if (n == 0) return previous;
  Complex current = x * Real(2, x.bits());
  for (unsigned long k = 1; k < n; ++k) {
    Complex next = x * current;
    next *= Real(2, x.bits());
    next -= previous * Real(static_cast<long>(2 * k), x.bits());
    previous = std::move(current);
    current = std::move(next);
  }
  return current;
}

mpz_class hermite_eval(unsigned long n, const mpz_class& x) {
  mpz_class previous = 1;
  if (n == 0) return previous;
  mpz_class current = 2 * x;
  for (unsigned long k = 1; k < n; ++k) {
    mpz_class next = 2 * x * current - 2 * k * previous;
    previous = std::move(current);
    current = std::move(next);
  }
  return current;
}

Real eigenfunction_eval(unsigned long n, const Real& x) {
  const Bits bits = x.bits();
  const Real pi = Real::pi(bits);
  Real previous = exp(-(x * x) / 2) / sqrt(sqrt(pi));
  if (n == 0) return previous;
  Real current = previous * x * sqrt(Real(2, bits));
  for (unsigned long k = 1; k < n; ++k) {
    // e_{k+1} = sqrt(2/(k+1)) x e_k - sqrt(k/(k+1)) e_{k-1}
    Real next = sqrt(Real(Rational(2, k + 1), bits)) * x * current;
    next -= sqrt(Real(Rational(k, k + 1), bits)) * previous;
    previous = std::move(current);
    current = std::move(next);
  }
  return current;
}

SurdTerm eigenfunction_norm(unsigned long n) {
  const mpz_class scale = factorial(n) << static_cast<mp_bitcnt_t>(n);
  return SurdTerm(ExactTerm(1), ExactTerm(Rational(mpz_class(1), scale), -1, 0));
}

SurdTerm eigenfunction_derivative_at_zero(unsigned long n, unsigned long k) {
  // b[j] is the coefficient of H_j exp(-x^2/2).
  std::map<unsigned long, Rational> b{{n, Rational(1)}};
  for (unsigned long step = 0; step < k; ++step) {
    std::map<unsigned long, Rational> next;
    for (const auto& [j, v] : b) {
      if (j > 0) next[j - 1] += v * j;
      next[j + 1] -= v / 2;
    }
    b.clear();
    for (auto& [j, v] : next)
      if (sgn(v) != 0) b.emplace(j, std::move(v));
  }
  Rational numerator = 0;
  for (const auto& [j, v] : b)
    if (j % 2 == 0) numerator += v * hermite_at_zero(j).mantissa();
  return SurdTerm(ExactTerm(numerator)) * eigenfunction_norm(n);
}

SurdTerm first_derivative_at_zero_via_lowering(unsigned long n) {
  if (n == 0) return SurdTerm();
  const Rational numerator = Rational(2 * n) * hermite_at_zero(n - 1).mantissa();
  return SurdTerm(ExactTerm(numerator)) * eigenfunction_norm(n);
}

Complex mehler_kernel(const Complex& z, const Complex& x, const Complex& y) {
  const Bits bits = z.bits();
  const Complex one(Real(1, bits));
  const Complex denominator = one - Complex(Real(4, bits)) * z * z;
  if (denominator.is_zero()) throw std::domain_error("Mehler kernel is singular at z = +-1/2");
  const Complex shifted = y - Complex(Real(2, bits)) * z * x;
  const Complex exponent = y * y - shifted * shifted / denominator;
  return exp(exponent) / sqrt(denominator);
}

}  // namespace eprod
