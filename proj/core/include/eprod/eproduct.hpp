#pragma once

// The e-product <F, G>_e = sum_n conj(<e_n, F>) <e_n, G>: partial sums,
// classification of the series and regularized values.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "eprod/coeff_sequence.hpp"
#include "eprod/distribution.hpp"
#include "eprod/exact.hpp"
#include "eprod/summation.hpp"

namespace eprod {

/// Listed in reporting precedence.
enum class Status { ZeroByParity, AbsolutelyConvergent, Convergent, Divergent, AbelSummable, Inconclusive };

const char* to_string(Status s);
/// True for statuses that carry a value.
bool has_value(Status s);

struct Diagnostics {
  /// S_0, S_1, ... over the inspected terms (nonzero parity lattice only).
  std::vector<Complex> partial_sums;
  std::optional<Real> ratio_estimate;
  std::optional<Real> raabe_estimate;
  std::vector<AbelTraceEntry> abel_trace;
  std::optional<Complex> wynn_estimate;
  unsigned long terms_used = 0;
  unsigned working_digits = 0;
  bool low_confidence = false;
  /// Short name of the argument that fixed the status.
  std::string certificate;
  std::optional<Real> domination_constant;
  std::vector<std::string> notes;
};

struct EProductResult {
  Status status = Status::Inconclusive;
  std::optional<Complex> value;
  std::optional<ExactComplex> exact_value;
  Diagnostics diagnostics;
};

/// A series u_0, u_1, ... with what is known about it structurally.
struct Series {
  /// Terms at a requested precision.
  TermSource terms;
  /// Every term vanishes identically.
  bool zero_by_parity = false;
  /// Terms at j >= support are exactly zero.
  std::optional<unsigned long> support;
  /// Terms are |c_j|^2 for some c_j.
  bool nonnegative = false;
  /// A divergent nonnegative series the terms are compared against.
  TermSource reference;
  std::string reference_label;
  /// Exact terms, when available.
  std::function<ExactComplex(unsigned long)> exact;
  /// Number of terms inspected before falling back to regularization.
  unsigned long inspect = 0;
};

/// Classifies sum_j u_j: parity short-circuit, finite support, ratio test,
/// stabilization or alternating decay, domination, Raabe, then Abel.
EProductResult classify_and_sum(const Series& series, const SummationConfig& cfg);

/// The e-product series of (F, G) restricted to the lattice of indices where
/// terms can be nonzero.
Series eproduct_series(const Distribution& F, const Distribution& G, const SummationConfig& cfg);
/// Same, from two coefficient streams.
Series eproduct_series(const std::function<CoeffSequence(Bits)>& F, const std::function<CoeffSequence(Bits)>& G,
                       const SummationConfig& cfg);

EProductResult classify_and_sum(const Distribution& F, const Distribution& G, const SummationConfig& cfg);

/// S_K for K = 0..N-1 over all indices.
std::vector<Complex> partial_sums(const Distribution& F, const Distribution& G, unsigned long N, Bits bits);
/// Exact S_K; throws std::invalid_argument if either side lacks exact coefficients.
std::vector<ExactComplex> exact_partial_sums(const Distribution& F, const Distribution& G, unsigned long N);

/// a_j(n, m), b_j(n, m) with (-4)^j and c_j(n, m), d_j(n, m) with 4^j; the
/// result is a rational multiple of pi.
ExactTerm exact_series_term(char kind, unsigned long j, unsigned long n, unsigned long m);
/// The same terms at working precision, generated by recurrence in j.
TermSource series_terms(char kind, unsigned long n, unsigned long m);
/// The same terms from exact rational recurrences, each rounded once.
TermSource exact_series_terms(char kind, unsigned long n, unsigned long m);

struct ProductDecomposition {
  /// Series kind and half indices, e.g. ('a', n/2, m/2).
  char kind;
  unsigned long n;
  unsigned long m;
  /// The e-product series term at lattice index j equals prefactor * term_j.
  SurdTerm prefactor;
  /// The prefactor in the textbook closed form (1/sqrt(n! m!) normalization),
  /// kept for comparison.
  SurdTerm textbook_prefactor;
};

/// Decomposition of <phi_n, psi_m>_e, <phi_n, phi_m>_e or <psi_n, psi_m>_e
/// (family "phi-psi", "phi-phi", "psi-psi") into prefactor times the series
/// above; nullopt for opposite parities. The prefactor is derived from the
/// coefficient closed forms and checked exactly on the first terms.
std::optional<ProductDecomposition> decompose(const std::string& family, unsigned long n, unsigned long m);

EProductResult phi_psi_product(unsigned long n, unsigned long m, const SummationConfig& cfg);
EProductResult phi_phi_product(unsigned long n, unsigned long m, const SummationConfig& cfg);
EProductResult psi_psi_product(unsigned long n, unsigned long m, const SummationConfig& cfg);

}  // namespace eprod
