#pragma once

// Exact Gamma values at half integers, terminating 2F1 sums and the moment
// integrals I_k(p) = int x^p exp(-x^2/2) H_k(x) dx.

#include "eprod/exact.hpp"

namespace eprod {

/// Gamma(j + 1/2) = (2j)! sqrt(pi) / (4^j j!).
ExactTerm gamma_half_integer(unsigned long j);

/// Rising factorial (a)_n.
Rational pochhammer(const Rational& a, unsigned long n);

/// F(-j, a; c; z) = sum_{i<=j} (-j)_i (a)_i / ((c)_i i!) z^i.
/// Throws std::domain_error when (c)_i vanishes for some i <= j.
Rational gauss_2f1_terminating(unsigned long j, const Rational& a, const Rational& c, const Rational& z);

/// I_k(p) from the half-line Gauss-Hermite moment closed forms, written
/// as rational * sqrt(2 pi). For k, p <= 40 the value is also checked
/// against moment_integral_recurrence; a mismatch throws std::logic_error
/// carrying both values.
ExactTerm moment_integral(unsigned long k, unsigned long p);

/// I_k(p) from I_0(p) = sqrt(2 pi) (p-1)!! and
/// I_{k+1}(p) = 2 I_k(p+1) - 2k I_{k-1}(p).
ExactTerm moment_integral_recurrence(unsigned long k, unsigned long p);

}  // namespace eprod
