#pragma once

// Series tests and regularized summation: ratio and Raabe estimates, Wynn's
// epsilon algorithm, Neville extrapolation and Abel summation.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "eprod/coeff_sequence.hpp"
#include "eprod/exact.hpp"
#include "eprod/real.hpp"

namespace eprod {

struct SummationConfig {
  /// Significant decimal digits carried by results.
  unsigned digits = 60;
  unsigned long max_terms = 5000;
  /// Relative tolerance; zero selects 10^(-floor(2 digits / 5)).
  Rational tolerance = 0;
  /// Abel levels k = 4..abel_levels; level k samples 1 - r in [2^-k, 1/2].
  unsigned abel_levels = 8;
  /// Polynomial degree of the extrapolation in 1 - r at each level.
  unsigned extrapolation_depth = 40;
  Rational divergence_margin{1, 10};
  Rational partial_sum_cap{mpz_class("1" + std::string(40, '0'))};
  /// Partial sums fed to the Wynn cross-check.
  unsigned wynn_terms = 100;
  /// Largest number of series terms one Abel evaluation may consume.
  unsigned long abel_term_budget = 400000;
  /// Largest cancellation (in digits) the Abel evaluation may absorb.
  unsigned guard_digits = 160;
  /// Worker threads for independent evaluations; 0 uses the hardware count.
  unsigned threads = 0;

  Bits bits() const { return bits_for_digits(digits + 20); }
  Real tol(Bits bits) const;
  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
  unsigned worker_count() const;
};

/// Limit of n (a_n / a_{n+1} - 1) over the window [first, last), extrapolated
/// in 1/n from four points n = last-1, (last-1)/2, ... Throws std::domain_error
/// on a nonpositive term in the window.
Real raabe_test(const std::vector<Real>& terms, unsigned long first, unsigned long last);
Real raabe_test(const std::vector<Real>& terms);

/// Geometric-mean ratio |a_last / a_first|^(1/(last-first)) over the tail.
std::optional<Real> ratio_estimate(const std::vector<Real>& magnitudes);

struct WynnResult {
  Complex value;
  /// Difference between the two most recent entries of the chosen column.
  Real error;
};

/// Wynn's epsilon algorithm on a sequence of partial sums.
WynnResult wynn_epsilon(const std::vector<Complex>& partial_sums);

/// Value at x0 of the interpolating polynomial through (xs, ys).
Complex neville(const std::vector<Real>& xs, const std::vector<Complex>& ys, const Real& x0);

struct AbelTraceEntry {
  Real r;
  Complex value;
  Complex extrapolant;
};

struct AbelResult {
  bool converged = false;
  std::optional<Complex> value;
  std::vector<AbelTraceEntry> trace;
  std::optional<Complex> wynn;
  bool wynn_agrees = false;
  unsigned working_digits = 0;
  unsigned long terms_used = 0;
  std::string failure;
};

/// Produces the terms u_0, u_1, ... at a requested precision.
using TermSource = std::function<CoeffSequence(Bits)>;

/// lim_{r -> 1-} sum u_n r^n. Each level evaluates A(1 - h) at Chebyshev
/// nodes h in [2^-k, 1/2] and extrapolates to h = 0; the value is accepted
/// once two successive levels agree within the tolerance, and it must agree
/// with Wynn's epsilon on the partial sums within ten times the tolerance.
AbelResult abel_sum(const TermSource& terms, const SummationConfig& cfg);
AbelResult abel_sum(const std::function<Complex(unsigned long, Bits)>& term, const SummationConfig& cfg);

}  // namespace eprod
