#pragma once

// Physicists' Hermite polynomials and the oscillator eigenfunctions
// e_n(x) = H_n(x) exp(-x^2/2) / sqrt(2^n n! sqrt(pi)).

#include <gmpxx.h>

#include "eprod/exact.hpp"
#include "eprod/real.hpp"

namespace eprod {

/// H_n(0): zero for odd n, (-1)^l (2l)!/l! for n = 2l.
ExactTerm hermite_at_zero(unsigned long n);

/// H_n(x) by the three-term recurrence.
Real hermite_eval(unsigned long n, const Real& x);
Complex hermite_eval(unsigned long n, const Complex& x);
mpz_class hermite_eval(unsigned long n, const mpz_class& x);

/// e_n(x) via the normalized recurrence (no overflow of H_n for large n).
Real eigenfunction_eval(unsigned long n, const Real& x);

/// 1 / sqrt(2^n n! sqrt(pi)) as a surd: pi^(-1/4) sqrt(1/(2^n n!)).
SurdTerm eigenfunction_norm(unsigned long n);

/// e_n^(k)(0), exact. Obtained by k applications of d/dx written in the
/// unnormalized basis H_j exp(-x^2/2):  d/dx h_j = j h_{j-1} - h_{j+1}/2,
/// which is (c - c^dag)/sqrt(2) after rescaling, then evaluation at 0.
SurdTerm eigenfunction_derivative_at_zero(unsigned long n, unsigned long k);

/// e_n'(0) = 2n H_{n-1}(0) / sqrt(2^n n! sqrt(pi)) using only the lowering
/// relation H_n' = 2n H_{n-1}.
SurdTerm first_derivative_at_zero_via_lowering(unsigned long n);

/// (1 - 4z^2)^(-1/2) exp(y^2 - (y - 2zx)^2 / (1 - 4z^2)), the closed form of
/// sum_n z^n/n! H_n(x) H_n(y). Throws std::domain_error at z = +-1/2.
Complex mehler_kernel(const Complex& z, const Complex& x, const Complex& y);

}  // namespace eprod
