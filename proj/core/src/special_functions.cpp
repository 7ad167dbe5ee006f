#include "eprod/special_functions.hpp"

#include <mutex>
#include <stdexcept>
#include <vector>

namespace eprod {

namespace {

constexpr unsigned long kCrossCheckLimit = 40;

// Rational multiples of sqrt(2 pi), I[k][p].
using MomentTable = std::vector<std::vector<Rational>>;

MomentTable build_moment_table(unsigned long k_max, unsigned long p_max) {
  const unsigned long width = p_max + k_max + 1;
  MomentTable table(k_max + 1, std::vector<Rational>(width, Rational(0)));
  for (unsigned long p = 0; p < width; p += 2) table[0][p] = Rational(double_factorial_odd(p / 2));
  for (unsigned long k = 0; k < k_max; ++k) {
    for (unsigned long p = 0; p + k + 1 < width; ++p) {
      Rational v = 2 * table[k][p + 1];
      if (k > 0) v -= Rational(2 * k) * table[k - 1][p];
      table[k + 1][p] = v;
    }
  }
  return table;
}

const MomentTable& cross_check_table() {
  static std::once_flag once;
  static MomentTable table;
  std::call_once(once, [] { table = build_moment_table(kCrossCheckLimit, kCrossCheckLimit); });
  return table;
}

ExactTerm sqrt_two_pi(Rational r) { return ExactTerm(std::move(r), 1, 1); }

}  // namespace

ExactTerm gamma_half_integer(unsigned long j) {
  const mpz_class four_j = mpz_class(1) << static_cast<mp_bitcnt_t>(2 * j);
  return ExactTerm(Rational(factorial(2 * j), four_j * factorial(j)), 1, 0);
}

Rational pochhammer(const Rational& a, unsigned long n) {
  Rational r = 1;
  for (unsigned long i = 0; i < n; ++i) r *= a + Rational(i);
  return r;
}

Rational gauss_2f1_terminating(unsigned long j, const Rational& a, const Rational& c, const Rational& z) {
  Rational sum = 1;
  Rational term = 1;
  for (unsigned long i = 0; i < j; ++i) {
    const Rational ci = c + Rational(i);
    if (sgn(ci) == 0) throw std::domain_error("2F1 pole: (c)_i vanishes at i = " + std::to_string(i + 1));
    term *= (Rational(i) - Rational(j)) * (a + Rational(i)) * z;
    term /= ci * Rational(i + 1);
    sum += term;
  }
  sum.canonicalize();
  return sum;
}

ExactTerm moment_integral(unsigned long k, unsigned long p) {
  if ((k + p) % 2 == 1) return ExactTerm();

  // F(-j, q+1/2; 1/2; 2) = (-1)^j F(-q, -j; 1/2; 2), and likewise with 3/2, so
  // the closed forms need only q+1 hypergeometric terms.
  Rational r;
  if (k % 2 == 0) {
    const unsigned long j = k / 2;
    const unsigned long q = p / 2;
    // 2^(q+2j+1/2) Gamma(q+1/2) Gamma(j+1/2) / sqrt(pi) F(-q, -j; 1/2; 2)
    const ExactTerm gammas = gamma_half_integer(q) * gamma_half_integer(j) / ExactTerm::sqrt_pi();
    r = gammas.mantissa() * Rational(mpz_class(1) << static_cast<mp_bitcnt_t>(q + 2 * j)) *
        gauss_2f1_terminating(q, -Rational(j), Rational(1, 2), 2);
  } else {
    const unsigned long j = (k - 1) / 2;
    const unsigned long q = (p - 1) / 2;
    // 2^(q+2j+7/2) Gamma(q+3/2) Gamma(j+3/2) / sqrt(pi) F(-q, -j; 3/2; 2)
    const ExactTerm gammas = gamma_half_integer(q + 1) * gamma_half_integer(j + 1) / ExactTerm::sqrt_pi();
    r = gammas.mantissa() * Rational(mpz_class(1) << static_cast<mp_bitcnt_t>(q + 2 * j + 3)) *
        gauss_2f1_terminating(q, -Rational(j), Rational(3, 2), 2);
  }
  ExactTerm value = sqrt_two_pi(r);

  if (k <= kCrossCheckLimit && p <= kCrossCheckLimit) {
    const ExactTerm check = sqrt_two_pi(cross_check_table()[k][p]);
    if (!(check == value))
      throw std::logic_error("moment integral I_" + std::to_string(k) + "(" + std::to_string(p) +
                             ") closed form " + value.to_string() + " disagrees with recurrence " +
                             check.to_string());
  }
  return value;
}

ExactTerm moment_integral_recurrence(unsigned long k, unsigned long p) {
  if ((k + p) % 2 == 1) return ExactTerm();
  if (k <= kCrossCheckLimit && p <= kCrossCheckLimit) return sqrt_two_pi(cross_check_table()[k][p]);
  return sqrt_two_pi(build_moment_table(k, p)[k][p]);
}

}  // namespace eprod
