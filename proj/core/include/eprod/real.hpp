#pragma once

// Multiple-precision real and complex scalars backed by MPFR.
//
// Every value carries its own binary precision. Binary operations produce a
// result at the larger of the operand precisions, so a computation started at
// a given precision stays there without any process-wide default. Values are
// independent objects and may be used from several threads at once.

#include <mpfr.h>
#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

namespace eprod {

using Bits = mpfr_prec_t;

/// Binary precision needed to carry `digits` significant decimal digits.
Bits bits_for_digits(unsigned digits);
/// Decimal digits represented by a binary precision (rounded down).
unsigned digits_for_bits(Bits bits);

class Real {
 public:
  explicit Real(Bits bits);
  Real(long value, Bits bits);
  Real(const mpz_class& value, Bits bits);
  Real(const mpq_class& value, Bits bits);

  static Real from_double(double value, Bits bits);
  /// Parses a decimal string ("1.25", "-3e-40"); throws std::invalid_argument.
  static Real parse(std::string_view text, Bits bits);
  static Real pi(Bits bits);
  /// 2^exponent, exact.
  static Real pow2(long exponent, Bits bits);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  Bits bits() const { return mpfr_get_prec(value_); }
  /// Returns a copy rounded to a different precision.
  Real with_bits(Bits bits) const;

  mpfr_srcptr get() const { return value_; }
  mpfr_ptr get() { return value_; }

  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  /// log10|x|, computed without overflow for huge exponents; -inf for zero.
  double log10_abs() const;
  /// Scientific notation with `digits` significant digits.
  std::string to_string(unsigned digits) const;
  /// Shortest form that parses back to the same value at this precision.
  std::string to_string() const;

  Real& operator+=(const Real& rhs);
  Real& operator-=(const Real& rhs);
  Real& operator*=(const Real& rhs);
  Real& operator/=(const Real& rhs);
  Real& operator+=(long rhs);
  Real& operator-=(long rhs);
  Real& operator*=(long rhs);
  Real& operator/=(long rhs);

  /// this += a * b, rounded once.
  void add_product(const Real& a, const Real& b);

  Real operator-() const;

  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b);
  friend bool operator==(const Real& a, long b) { return mpfr_cmp_si(a.value_, b) == 0; }
  friend std::partial_ordering operator<=>(const Real& a, long b);

 private:
  void raise_to(Bits bits);

  mpfr_t value_;
};

Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator+(const Real& a, long b);
Real operator-(const Real& a, long b);
Real operator*(const Real& a, long b);
Real operator/(const Real& a, long b);
Real operator*(long a, const Real& b);
Real operator+(long a, const Real& b);
Real operator-(long a, const Real& b);

Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real cos(const Real& x);
Real sin(const Real& x);
Real atan2(const Real& y, const Real& x);
Real pow(const Real& x, long n);
Real hypot(const Real& x, const Real& y);
Real max(const Real& a, const Real& b);

std::ostream& operator<<(std::ostream& os, const Real& x);

struct Complex {
  Real re;
  Real im;

  explicit Complex(Bits bits) : re(bits), im(bits) {}
  Complex(Real real_part) : re(std::move(real_part)), im(re.bits()) {}
  Complex(Real real_part, Real imag_part) : re(std::move(real_part)), im(std::move(imag_part)) {}

  static Complex i(Bits bits) { return Complex(Real(bits), Real(1, bits)); }

  Bits bits() const { return re.bits() > im.bits() ? re.bits() : im.bits(); }
  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  bool is_real() const { return im.is_zero(); }
  bool is_finite() const { return re.is_finite() && im.is_finite(); }

  Complex& operator+=(const Complex& rhs);
  Complex& operator-=(const Complex& rhs);
  Complex& operator*=(const Complex& rhs);
  Complex& operator*=(const Real& rhs);
  Complex& operator/=(const Complex& rhs);

  Complex operator-() const { return Complex(-re, -im); }

  friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
};

Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Real& b);
Complex operator*(const Real& a, const Complex& b);
Complex operator/(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Real& b);

Complex conj(const Complex& z);
Real abs(const Complex& z);
/// |z|^2
Real norm(const Complex& z);
/// Principal branch.
Complex sqrt(const Complex& z);
Complex exp(const Complex& z);
/// i^n for integer n, exact.
Complex i_power(long n, Bits bits);

std::ostream& operator<<(std::ostream& os, const Complex& z);

/// |a - b| <= tol * max(1, |b|)
bool near(const Complex& a, const Complex& b, const Real& tol);
bool near(const Real& a, const Real& b, const Real& tol);

}  // namespace eprod
