#pragma once

// Exact scalars for the closed-form series.
//
// ExactTerm    rational * pi^(p/2) * 2^(q/2), q kept in {0, 1}
// SurdTerm     ExactTerm * sqrt(ExactTerm)  (quarter powers of pi, sqrt(n!))
// ExactSum     finite sum of SurdTerms, like terms merged
// ExactComplex pair of ExactSums

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

#include "eprod/real.hpp"

namespace eprod {

using Rational = mpq_class;

/// Parses "3", "-2/7", "2.5", "1e-3", "-1.25e2" exactly; throws std::invalid_argument.
Rational parse_rational(std::string_view text);
/// Shortest exact text: "3", "-2/7".
std::string rational_to_string(const Rational& q);

mpz_class factorial(unsigned long n);
/// (2n-1)!! with (-1)!! = 1.
mpz_class double_factorial_odd(unsigned long n);
mpz_class binomial(unsigned long n, unsigned long k);

class ExactTerm {
 public:
  ExactTerm() : mantissa_(0) {}
  ExactTerm(Rational mantissa, long pi_half_power = 0, long two_half_power = 0);
  ExactTerm(long value) : ExactTerm(Rational(value)) {}

  static ExactTerm sqrt_pi() { return ExactTerm(1, 1, 0); }
  static ExactTerm sqrt_two() { return ExactTerm(1, 0, 1); }

  const Rational& mantissa() const { return mantissa_; }
  long pi_half_power() const { return pi_half_power_; }
  long two_half_power() const { return two_half_power_; }

  bool is_zero() const { return sgn(mantissa_) == 0; }
  int sign() const { return sgn(mantissa_); }
  /// True when the two terms can be added without leaving the representation.
  bool like(const ExactTerm& other) const;

  ExactTerm& operator*=(const ExactTerm& rhs);
  ExactTerm& operator/=(const ExactTerm& rhs);
  /// Throws std::domain_error unless the terms are alike (or one is zero).
  ExactTerm& operator+=(const ExactTerm& rhs);
  ExactTerm& operator-=(const ExactTerm& rhs);
  ExactTerm operator-() const;

  ExactTerm pow(long n) const;
  Real to_real(Bits bits) const;
  std::string to_string() const;

  friend bool operator==(const ExactTerm&, const ExactTerm&) = default;

 private:
  void normalize();

  Rational mantissa_;
  long pi_half_power_ = 0;
  long two_half_power_ = 0;
};

ExactTerm operator*(ExactTerm a, const ExactTerm& b);
ExactTerm operator/(ExactTerm a, const ExactTerm& b);
ExactTerm operator+(ExactTerm a, const ExactTerm& b);
ExactTerm operator-(ExactTerm a, const ExactTerm& b);

/// coefficient * sqrt(radicand), radicand > 0.
class SurdTerm {
 public:
  SurdTerm() : radicand_(1) {}
  SurdTerm(ExactTerm coefficient, ExactTerm radicand = ExactTerm(1));

  const ExactTerm& coefficient() const { return coefficient_; }
  const ExactTerm& radicand() const { return radicand_; }

  bool is_zero() const { return coefficient_.is_zero(); }
  int sign() const { return coefficient_.sign(); }
  bool like(const SurdTerm& other) const;

  SurdTerm& operator*=(const SurdTerm& rhs);
  SurdTerm operator-() const { return SurdTerm(-coefficient_, radicand_); }
  /// value^2 as an ExactTerm; used for sign-and-square equality.
  ExactTerm square() const;

  Real to_real(Bits bits) const;
  std::string to_string() const;

  /// Value equality (distinct radicand spellings of the same number compare equal).
  friend bool operator==(const SurdTerm& a, const SurdTerm& b);

 private:
  void normalize();

  ExactTerm coefficient_;
  ExactTerm radicand_;
};

SurdTerm operator*(SurdTerm a, const SurdTerm& b);

class ExactSum {
 public:
  ExactSum() = default;
  ExactSum(SurdTerm term);
  ExactSum(ExactTerm term) : ExactSum(SurdTerm(std::move(term))) {}

  const std::vector<SurdTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  ExactSum& operator+=(const ExactSum& rhs);
  ExactSum& operator-=(const ExactSum& rhs);
  ExactSum& operator*=(const ExactSum& rhs);
  ExactSum operator-() const;

  Real to_real(Bits bits) const;
  std::string to_string() const;

  /// Structural equality after merging like terms; both sides must use the
  /// same radicand spellings, which holds for values produced by this library.
  friend bool operator==(const ExactSum& a, const ExactSum& b);

 private:
  void add(const SurdTerm& term);

  std::vector<SurdTerm> terms_;
};

ExactSum operator+(ExactSum a, const ExactSum& b);
ExactSum operator-(ExactSum a, const ExactSum& b);
ExactSum operator*(ExactSum a, const ExactSum& b);

struct ExactComplex {
  ExactSum re;
  ExactSum im;

  ExactComplex() = default;
  ExactComplex(ExactSum real_part) : re(std::move(real_part)) {}
  ExactComplex(ExactSum real_part, ExactSum imag_part) : re(std::move(real_part)), im(std::move(imag_part)) {}

  bool is_zero() const { return re.is_zero() && im.is_zero(); }

  ExactComplex& operator+=(const ExactComplex& rhs);
  ExactComplex& operator-=(const ExactComplex& rhs);
  ExactComplex operator-() const { return ExactComplex(-re, -im); }

  Complex to_complex(Bits bits) const;
  std::string to_string() const;

  friend bool operator==(const ExactComplex&, const ExactComplex&) = default;
};

ExactComplex operator+(ExactComplex a, const ExactComplex& b);
ExactComplex operator-(ExactComplex a, const ExactComplex& b);
ExactComplex operator*(const ExactComplex& a, const ExactComplex& b);
ExactComplex conj(const ExactComplex& z);

/// Scalar weight of a linear combination: (re + i im) * sqrt(radicand).
struct Weight {
  Rational re{1};
  Rational im{0};
  Rational radicand{1};

  static Weight real(Rational value) { return Weight{std::move(value), 0, 1}; }
  static Weight imaginary_unit() { return Weight{0, 1, 1}; }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_one() const { return re == 1 && sgn(im) == 0 && radicand == 1; }

  Weight conj() const { return Weight{re, -im, radicand}; }
  ExactComplex to_exact() const;
  Complex to_complex(Bits bits) const;
  /// Grammar form, e.g. "(1/2+3i)*sqrt(2)"; "1" for the unit weight.
  std::string to_string() const;

  friend Weight operator*(const Weight& a, const Weight& b);
  friend bool operator==(const Weight&, const Weight&) = default;
};

}  // namespace eprod
