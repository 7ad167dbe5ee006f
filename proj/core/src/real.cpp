#include "eprod/real.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace eprod {

Bits bits_for_digits(unsigned digits) {
  // log2(10) = 3.3219...; one extra word keeps the last decimal digit honest.
  return static_cast<Bits>(std::ceil(digits * 3.321928094887362)) + 8;
}

unsigned digits_for_bits(Bits bits) {
  return static_cast<unsigned>(std::floor(static_cast<double>(bits - 8) / 3.321928094887362));
}

Real::Real(Bits bits) {
  mpfr_init2(value_, bits);
  mpfr_set_zero(value_, 1);
}

Real::Real(long value, Bits bits) {
  mpfr_init2(value_, bits);
  mpfr_set_si(value_, value, MPFR_RNDN);
}

Real::Real(const mpz_class& value, Bits bits) {
  mpfr_init2(value_, bits);
  mpfr_set_z(value_, value.get_mpz_t(), MPFR_RNDN);
}

Real::Real(const mpq_class& value, Bits bits) {
  mpfr_init2(value_, bits);
  mpfr_set_q(value_, value.get_mpq_t(), MPFR_RNDN);
}

Real Real::from_double(double value, Bits bits) {
  Real r(bits);
  mpfr_set_d(r.value_, value, MPFR_RNDN);
  return r;
}

Real Real::parse(std::string_view text, Bits bits) {
  Real r(bits);
  std::string buffer(text);
  char* end = nullptr;
  if (buffer.empty() || mpfr_strtofr(r.value_, buffer.c_str(), &end, 10, MPFR_RNDN) != 0 ||
      end != buffer.c_str() + buffer.size()) {
    // mpfr_strtofr returns the ternary value, which is nonzero for inexact
    // conversions; only a short parse is an error.
    if (buffer.empty() || end != buffer.c_str() + buffer.size())
      throw std::invalid_argument("not a decimal number: '" + buffer + "'");
  }
  return r;
}

Real Real::pi(Bits bits) {
  Real r(bits);
  mpfr_const_pi(r.value_, MPFR_RNDN);
  return r;
}

Real Real::pow2(long exponent, Bits bits) {
  Real r(1, bits);
  mpfr_mul_2si(r.value_, r.value_, exponent, MPFR_RNDN);
  return r;
}

Real::Real(const Real& other) {
  mpfr_init2(value_, other.bits());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.bits());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

Real Real::with_bits(Bits bits) const {
  Real r(bits);
  mpfr_set(r.value_, value_, MPFR_RNDN);
  return r;
}

double Real::log10_abs() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  long exponent = 0;
  const double mantissa = mpfr_get_d_2exp(&exponent, value_, MPFR_RNDN);
  return std::log10(std::fabs(mantissa)) + static_cast<double>(exponent) * 0.30102999566398120;
}

std::string Real::to_string(unsigned digits) const {
  if (digits == 0) digits = 1;
  char* raw = nullptr;
  const std::string format = "%." + std::to_string(digits - 1) + "Re";
  if (mpfr_asprintf(&raw, format.c_str(), value_) < 0) throw std::runtime_error("mpfr_asprintf failed");
  std::string out(raw);
  mpfr_free_str(raw);
  return out;
}

std::string Real::to_string() const { return to_string(digits_for_bits(bits()) + 2); }

void Real::raise_to(Bits bits) {
  if (bits > this->bits()) mpfr_prec_round(value_, bits, MPFR_RNDN);
}

Real& Real::operator+=(const Real& rhs) {
  raise_to(rhs.bits());
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator-=(const Real& rhs) {
  raise_to(rhs.bits());
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator*=(const Real& rhs) {
  raise_to(rhs.bits());
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator/=(const Real& rhs) {
  raise_to(rhs.bits());
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator+=(long rhs) {
  mpfr_add_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}

Real& Real::operator-=(long rhs) {
  mpfr_sub_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}

Real& Real::operator*=(long rhs) {
  mpfr_mul_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}

Real& Real::operator/=(long rhs) {
  mpfr_div_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}

void Real::add_product(const Real& a, const Real& b) {
  raise_to(a.bits() > b.bits() ? a.bits() : b.bits());
  mpfr_fma(value_, a.value_, b.value_, value_, MPFR_RNDN);
}

Real Real::operator-() const {
  Real r(bits());
  mpfr_neg(r.value_, value_, MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.value_, b.value_);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

std::partial_ordering operator<=>(const Real& a, long b) {
  if (mpfr_nan_p(a.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp_si(a.value_, b);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

namespace {

Bits wider(const Real& a, const Real& b) { return a.bits() > b.bits() ? a.bits() : b.bits(); }

template <typename Op>
Real unary(const Real& x, Op op) {
  Real r(x.bits());
  op(r.get(), x.get(), MPFR_RNDN);
  return r;
}

}  // namespace

Real operator+(const Real& a, const Real& b) {
  Real r(wider(a, b));
  mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

Real operator-(const Real& a, const Real& b) {
  Real r(wider(a, b));
  mpfr_sub(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

Real operator*(const Real& a, const Real& b) {
  Real r(wider(a, b));
  mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

Real operator/(const Real& a, const Real& b) {
  Real r(wider(a, b));
  mpfr_div(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

Real operator+(const Real& a, long b) { Real r(a); r += b; return r; }
Real operator-(const Real& a, long b) { Real r(a); r -= b; return r; }
Real operator*(const Real& a, long b) { Real r(a); r *= b; return r; }
Real operator/(const Real& a, long b) { Real r(a); r /= b; return r; }
Real operator*(long a, const Real& b) { return b * a; }
Real operator+(long a, const Real& b) { return b + a; }
Real operator-(long a, const Real& b) { Real r(-b); r += a; return r; }

Real abs(const Real& x) { return unary(x, mpfr_abs); }
Real sqrt(const Real& x) { return unary(x, mpfr_sqrt); }
Real exp(const Real& x) { return unary(x, mpfr_exp); }
Real log(const Real& x) { return unary(x, mpfr_log); }
Real cos(const Real& x) { return unary(x, mpfr_cos); }
Real sin(const Real& x) { return unary(x, mpfr_sin); }

Real atan2(const Real& y, const Real& x) {
  Real r(wider(y, x));
  mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
  return r;
}

Real pow(const Real& x, long n) {
  Real r(x.bits());
  mpfr_pow_si(r.get(), x.get(), n, MPFR_RNDN);
  return r;
}

Real hypot(const Real& x, const Real& y) {
  Real r(wider(x, y));
  mpfr_hypot(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}

Real max(const Real& a, const Real& b) { return a < b ? b : a; }

std::ostream& operator<<(std::ostream& os, const Real& x) { return os << x.to_string(); }

Complex& Complex::operator+=(const Complex& rhs) {
  re += rhs.re;
  im += rhs.im;
  return *this;
}

Complex& Complex::operator-=(const Complex& rhs) {
  re -= rhs.re;
  im -= rhs.im;
  return *this;
}

Complex& Complex::operator*=(const Complex& rhs) {
  *this = *this * rhs;
  return *this;
}

Complex& Complex::operator*=(const Real& rhs) {
  re *= rhs;
  im *= rhs;
  return *this;
}

Complex& Complex::operator/=(const Complex& rhs) {
  *this = *this / rhs;
  return *this;
}

Complex operator+(const Complex& a, const Complex& b) { return Complex(a.re + b.re, a.im + b.im); }
Complex operator-(const Complex& a, const Complex& b) { return Complex(a.re - b.re, a.im - b.im); }

Complex operator*(const Complex& a, const Complex& b) {
  if (a.im.is_zero() && b.im.is_zero()) return Complex(a.re * b.re, Real(a.bits() > b.bits() ? a.bits() : b.bits()));
  Real re = a.re * b.re;
  re -= a.im * b.im;
  Real im = a.re * b.im;
  im += a.im * b.re;
  return Complex(std::move(re), std::move(im));
}

Complex operator*(const Complex& a, const Real& b) { return Complex(a.re * b, a.im * b); }
Complex operator*(const Real& a, const Complex& b) { return b * a; }

Complex operator/(const Complex& a, const Complex& b) {
  if (b.im.is_zero()) return a / b.re;
  const Real denominator = norm(b);
  Real re = a.re * b.re;
  re += a.im * b.im;
  Real im = a.im * b.re;
  im -= a.re * b.im;
  return Complex(re / denominator, im / denominator);
}

Complex operator/(const Complex& a, const Real& b) { return Complex(a.re / b, a.im / b); }

Complex conj(const Complex& z) { return Complex(z.re, -z.im); }
Real abs(const Complex& z) { return hypot(z.re, z.im); }

Real norm(const Complex& z) {
  Real r = z.re * z.re;
  r.add_product(z.im, z.im);
  return r;
}

Complex sqrt(const Complex& z) {
  if (z.im.is_zero()) {
    if (z.re.sign() >= 0) return Complex(sqrt(z.re), Real(z.bits()));
    return Complex(Real(z.bits()), sqrt(-z.re));
  }
  const Real modulus = abs(z);
  Real re = sqrt((modulus + z.re) / 2);
  Real im = sqrt((modulus - z.re) / 2);
  if (z.im.sign() < 0) im = -im;
  return Complex(std::move(re), std::move(im));
}

Complex exp(const Complex& z) {
  const Real scale = exp(z.re);
  if (z.im.is_zero()) return Complex(scale, Real(z.bits()));
  return Complex(scale * cos(z.im), scale * sin(z.im));
}

Complex i_power(long n, Bits bits) {
  switch (((n % 4) + 4) % 4) {
    case 0: return Complex(Real(1, bits), Real(bits));
    case 1: return Complex(Real(bits), Real(1, bits));
    case 2: return Complex(Real(-1, bits), Real(bits));
    default: return Complex(Real(bits), Real(-1, bits));
  }
}

std::ostream& operator<<(std::ostream& os, const Complex& z) {
  return os << '(' << z.re << ", " << z.im << ')';
}

bool near(const Complex& a, const Complex& b, const Real& tol) {
  Real scale = abs(b);
  if (scale < 1) scale = Real(1, scale.bits());
  return abs(a - b) <= tol * scale;
}

bool near(const Real& a, const Real& b, const Real& tol) {
  Real scale = abs(b);
  if (scale < 1) scale = Real(1, scale.bits());
  return abs(a - b) <= tol * scale;
}

}  // namespace eprod
