#include "eprod/exact.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace eprod {

namespace {

long floor_div2(long v) { return v >= 0 ? v / 2 : -((-v + 1) / 2); }

bool is_square(const mpz_class& z) { return sgn(z) >= 0 && mpz_perfect_square_p(z.get_mpz_t()) != 0; }

mpz_class isqrt(const mpz_class& z) {
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), z.get_mpz_t());
  return r;
}

// Removes the power of two from z, returning its exponent.
unsigned long strip_twos(mpz_class& z) {
  if (sgn(z) == 0) return 0;
  const unsigned long e = mpz_scan1(z.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(z.get_mpz_t(), z.get_mpz_t(), e);
  return e;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto fail = [&]() -> Rational { throw std::invalid_argument("not a rational number: '" + s + "'"); };
  if (s.empty()) return fail();

  if (const auto slash = s.find('/'); slash != std::string::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (sgn(den) == 0) throw std::invalid_argument("zero denominator: '" + s + "'");
    Rational q = num / den;
    q.canonicalize();
    return q;
  }

  std::size_t i = 0;
  bool negative = false;
  if (s[i] == '+' || s[i] == '-') negative = s[i++] == '-';
  std::string digits;
  long scale = 0;
  bool seen_point = false;
  bool any_digit = false;
  for (; i < s.size(); ++i) {
    const char ch = s[i];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits.push_back(ch);
      any_digit = true;
      if (seen_point) --scale;
    } else if (ch == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) return fail();
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') return fail();
    ++i;
    std::size_t used = 0;
    long exponent = 0;
    try {
      exponent = std::stol(s.substr(i), &used);
    } catch (const std::exception&) {
      return fail();
    }
    if (used != s.size() - i) return fail();
    scale += exponent;
  }

  mpz_class mantissa(digits, 10);
  mpz_class power;
  mpz_ui_pow_ui(power.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  Rational q = scale >= 0 ? Rational(mantissa * power) : Rational(mantissa, power);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

std::string rational_to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

mpz_class factorial(unsigned long n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

mpz_class double_factorial_odd(unsigned long n) {
  if (n == 0) return 1;
  mpz_class r;
  mpz_2fac_ui(r.get_mpz_t(), 2 * n - 1);
  return r;
}

mpz_class binomial(unsigned long n, unsigned long k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

// ---------------------------------------------------------------- ExactTerm

ExactTerm::ExactTerm(Rational mantissa, long pi_half_power, long two_half_power)
    : mantissa_(std::move(mantissa)), pi_half_power_(pi_half_power), two_half_power_(two_half_power) {
  normalize();
}

void ExactTerm::normalize() {
  mantissa_.canonicalize();
  if (sgn(mantissa_) == 0) {
    pi_half_power_ = 0;
    two_half_power_ = 0;
    return;
  }
  const long whole = floor_div2(two_half_power_);
  if (whole > 0) mantissa_ *= Rational(mpz_class(1) << static_cast<mp_bitcnt_t>(whole));
  if (whole < 0) mantissa_ /= Rational(mpz_class(1) << static_cast<mp_bitcnt_t>(-whole));
  two_half_power_ -= 2 * whole;
}

bool ExactTerm::like(const ExactTerm& other) const {
  return is_zero() || other.is_zero() ||
         (pi_half_power_ == other.pi_half_power_ && two_half_power_ == other.two_half_power_);
}

ExactTerm& ExactTerm::operator*=(const ExactTerm& rhs) {
  mantissa_ *= rhs.mantissa_;
  pi_half_power_ += rhs.pi_half_power_;
  two_half_power_ += rhs.two_half_power_;
  normalize();
  return *this;
}

ExactTerm& ExactTerm::operator/=(const ExactTerm& rhs) {
  if (rhs.is_zero()) throw std::domain_error("ExactTerm division by zero");
  mantissa_ /= rhs.mantissa_;
  pi_half_power_ -= rhs.pi_half_power_;
  two_half_power_ -= rhs.two_half_power_;
  normalize();
  return *this;
}

ExactTerm& ExactTerm::operator+=(const ExactTerm& rhs) {
  if (!like(rhs)) throw std::domain_error("ExactTerm sum of unlike terms: " + to_string() + " + " + rhs.to_string());
  if (is_zero()) {
    *this = rhs;
    return *this;
  }
  mantissa_ += rhs.mantissa_;
  normalize();
  return *this;
}

ExactTerm& ExactTerm::operator-=(const ExactTerm& rhs) { return *this += -rhs; }

ExactTerm ExactTerm::operator-() const {
  ExactTerm r(*this);
  r.mantissa_ = -r.mantissa_;
  return r;
}

ExactTerm ExactTerm::pow(long n) const {
  if (n < 0) return ExactTerm(1) / pow(-n);
  ExactTerm r(1);
  ExactTerm base(*this);
  for (long e = n; e > 0; e >>= 1) {
    if (e & 1) r *= base;
    base *= base;
  }
  return r;
}

Real ExactTerm::to_real(Bits bits) const {
  Real r(mantissa_, bits);
  if (is_zero()) return r;
  if (pi_half_power_ != 0) {
    const Real root_pi = sqrt(Real::pi(bits));
    r *= eprod::pow(root_pi, pi_half_power_);
  }
  if (two_half_power_ != 0) r *= sqrt(Real(2, bits));
  return r;
}

std::string ExactTerm::to_string() const {
  std::string out = rational_to_string(mantissa_);
  if (pi_half_power_ != 0) out += "*pi^(" + std::to_string(pi_half_power_) + "/2)";
  if (two_half_power_ != 0) out += "*sqrt(2)";
  return out;
}

ExactTerm operator*(ExactTerm a, const ExactTerm& b) { return a *= b; }
ExactTerm operator/(ExactTerm a, const ExactTerm& b) { return a /= b; }
ExactTerm operator+(ExactTerm a, const ExactTerm& b) { return a += b; }
ExactTerm operator-(ExactTerm a, const ExactTerm& b) { return a -= b; }

// ----------------------------------------------------------------- SurdTerm

SurdTerm::SurdTerm(ExactTerm coefficient, ExactTerm radicand)
    : coefficient_(std::move(coefficient)), radicand_(std::move(radicand)) {
  normalize();
}

namespace {

const std::vector<unsigned long>& small_odd_primes() {
  static const std::vector<unsigned long> primes = [] {
    std::vector<unsigned long> out;
    for (unsigned long n = 3; n < 2000; n += 2) {
      bool prime = true;
      for (unsigned long d = 3; d * d <= n && prime; d += 2) prime = n % d != 0;
      if (prime) out.push_back(n);
    }
    return out;
  }();
  return primes;
}

}  // namespace

void SurdTerm::normalize() {
  if (radicand_.sign() < 0) throw std::domain_error("SurdTerm with negative radicand");
  if (coefficient_.is_zero() || radicand_.is_zero()) {
    coefficient_ = ExactTerm();
    radicand_ = ExactTerm(1);
    return;
  }
  // sqrt(pi^(p/2)) with p = 2s + t contributes pi^(s/2) outright.
  const long p = radicand_.pi_half_power();
  const long s = floor_div2(p);

  mpz_class num = radicand_.mantissa().get_num();
  mpz_class den = radicand_.mantissa().get_den();
  // sqrt(2^e) = 2^(e/2): move powers of two into the coefficient.
  const long twos = static_cast<long>(strip_twos(num)) - static_cast<long>(strip_twos(den));

  // sqrt(num/den) = sqrt(num den)/den, then square factors of small primes
  // move out so equal values share one spelling.
  mpz_class rest = num * den;
  mpz_class root = 1;
  for (unsigned long prime : small_odd_primes()) {
    if (rest == 1) break;
    if (!mpz_divisible_ui_p(rest.get_mpz_t(), prime)) continue;
    mpz_class factor = prime;
    const mp_bitcnt_t count = mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), factor.get_mpz_t());
    mpz_class power;
    mpz_ui_pow_ui(power.get_mpz_t(), prime, count / 2);
    root *= power;
    if (count % 2 == 1) rest *= prime;
  }
  if (is_square(rest)) {
    root *= isqrt(rest);
    rest = 1;
  }
  coefficient_ *= ExactTerm(Rational(root, den), s, twos);
  radicand_ = ExactTerm(Rational(rest), p - 2 * s, radicand_.two_half_power());
}

bool SurdTerm::like(const SurdTerm& other) const {
  if (is_zero() || other.is_zero()) return true;
  return radicand_ == other.radicand_ && coefficient_.like(other.coefficient_);
}

SurdTerm& SurdTerm::operator*=(const SurdTerm& rhs) {
  coefficient_ *= rhs.coefficient_;
  radicand_ *= rhs.radicand_;
  normalize();
  return *this;
}

ExactTerm SurdTerm::square() const { return coefficient_ * coefficient_ * radicand_; }

Real SurdTerm::to_real(Bits bits) const {
  Real r = coefficient_.to_real(bits);
  if (!(radicand_ == ExactTerm(1)) && !r.is_zero()) r *= sqrt(radicand_.to_real(bits));
  return r;
}

std::string SurdTerm::to_string() const {
  if (radicand_ == ExactTerm(1)) return coefficient_.to_string();
  return coefficient_.to_string() + "*sqrt(" + radicand_.to_string() + ")";
}

bool operator==(const SurdTerm& a, const SurdTerm& b) { return a.sign() == b.sign() && a.square() == b.square(); }

SurdTerm operator*(SurdTerm a, const SurdTerm& b) { return a *= b; }

// ----------------------------------------------------------------- ExactSum

ExactSum::ExactSum(SurdTerm term) { add(term); }

void ExactSum::add(const SurdTerm& term) {
  if (term.is_zero()) return;
  for (auto it = terms_.begin(); it != terms_.end(); ++it) {
    if (it->like(term)) {
      *it = SurdTerm(it->coefficient() + term.coefficient(), it->radicand());
      if (it->is_zero()) terms_.erase(it);
      return;
    }
  }
  terms_.push_back(term);
}

ExactSum& ExactSum::operator+=(const ExactSum& rhs) {
  for (const auto& t : rhs.terms_) add(t);
  return *this;
}

ExactSum& ExactSum::operator-=(const ExactSum& rhs) {
  for (const auto& t : rhs.terms_) add(-t);
  return *this;
}

ExactSum& ExactSum::operator*=(const ExactSum& rhs) {
  ExactSum product;
  for (const auto& a : terms_)
    for (const auto& b : rhs.terms_) product.add(a * b);
  *this = std::move(product);
  return *this;
}

ExactSum ExactSum::operator-() const {
  ExactSum r;
  for (const auto& t : terms_) r.terms_.push_back(-t);
  return r;
}

Real ExactSum::to_real(Bits bits) const {
  Real r(bits);
  for (const auto& t : terms_) r += t.to_real(bits);
  return r;
}

std::string ExactSum::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i > 0) out += " + ";
    out += terms_[i].to_string();
  }
  return out;
}

bool operator==(const ExactSum& a, const ExactSum& b) {
  ExactSum diff = a;
  diff -= b;
  return diff.is_zero();
}

ExactSum operator+(ExactSum a, const ExactSum& b) { return a += b; }
ExactSum operator-(ExactSum a, const ExactSum& b) { return a -= b; }
ExactSum operator*(ExactSum a, const ExactSum& b) { return a *= b; }

// ------------------------------------------------------------- ExactComplex

ExactComplex& ExactComplex::operator+=(const ExactComplex& rhs) {
  re += rhs.re;
  im += rhs.im;
  return *this;
}

ExactComplex& ExactComplex::operator-=(const ExactComplex& rhs) {
  re -= rhs.re;
  im -= rhs.im;
  return *this;
}

Complex ExactComplex::to_complex(Bits bits) const { return Complex(re.to_real(bits), im.to_real(bits)); }

std::string ExactComplex::to_string() const {
  if (im.is_zero()) return re.to_string();
  return "(" + re.to_string() + ") + i*(" + im.to_string() + ")";
}

ExactComplex operator+(ExactComplex a, const ExactComplex& b) { return a += b; }
ExactComplex operator-(ExactComplex a, const ExactComplex& b) { return a -= b; }

ExactComplex operator*(const ExactComplex& a, const ExactComplex& b) {
  if (a.im.is_zero() && b.im.is_zero()) return ExactComplex(a.re * b.re);
  return ExactComplex(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
}

ExactComplex conj(const ExactComplex& z) { return ExactComplex(z.re, -z.im); }

// ------------------------------------------------------------------- Weight

ExactComplex Weight::to_exact() const {
  const ExactTerm root(radicand);
  return ExactComplex(ExactSum(SurdTerm(ExactTerm(re), root)), ExactSum(SurdTerm(ExactTerm(im), root)));
}

Complex Weight::to_complex(Bits bits) const {
  Complex z(Real(re, bits), Real(im, bits));
  if (radicand != 1) z *= sqrt(Real(radicand, bits));
  return z;
}

std::string Weight::to_string() const {
  std::string out;
  if (sgn(im) == 0) {
    out = rational_to_string(re);
  } else if (sgn(re) == 0) {
    out = (im == 1 ? std::string("i") : "(" + rational_to_string(im) + ")*i");
  } else {
    out = "(" + rational_to_string(re) + (sgn(im) > 0 ? "+" : "-") + rational_to_string(abs(im)) + "i)";
  }
  if (radicand != 1) out = (out == "1" ? std::string() : out + "*") + "sqrt(" + rational_to_string(radicand) + ")";
  return out;
}

Weight operator*(const Weight& a, const Weight& b) {
  Weight w{a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re, a.radicand * b.radicand};
  const mpz_class& num = w.radicand.get_num();
  const mpz_class& den = w.radicand.get_den();
  if (is_square(num) && is_square(den)) {
    const Rational root(isqrt(num), isqrt(den));
    w.re *= root;
    w.im *= root;
    w.radicand = 1;
  }
  w.re.canonicalize();
  w.im.canonicalize();
  w.radicand.canonicalize();
  return w;
}

}  // namespace eprod
