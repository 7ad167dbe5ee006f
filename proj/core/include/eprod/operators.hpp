#pragma once

// Words in the ladder alphabet {c, c^dag, x, D} acting on coefficient
// sequences, and the formal adjoint defined through the e-product.

#include <stdexcept>
#include <string>
#include <vector>

#include "eprod/coeff_sequence.hpp"
#include "eprod/distribution.hpp"
#include "eprod/eproduct.hpp"
#include "eprod/exact.hpp"
#include "eprod/summation.hpp"

namespace eprod {

enum class Letter { C, CDag, X, D };

const char* to_string(Letter l);

struct OperatorTerm {
  Weight coefficient;
  /// Leftmost letter first; the rightmost letter acts first.
  std::vector<Letter> word;

  friend bool operator==(const OperatorTerm&, const OperatorTerm&) = default;
};

struct OperatorExpr {
  std::vector<OperatorTerm> terms;

  static OperatorExpr identity() { return OperatorExpr{{OperatorTerm{Weight{}, {}}}}; }
  static OperatorExpr letter(Letter l) { return OperatorExpr{{OperatorTerm{Weight{}, {l}}}}; }

  bool is_ladder() const;

  friend bool operator==(const OperatorExpr&, const OperatorExpr&) = default;
};

OperatorExpr operator+(const OperatorExpr& a, const OperatorExpr& b);
OperatorExpr operator-(const OperatorExpr& a, const OperatorExpr& b);
/// Composition a then b acting first: (a * b) s = a (b s).
OperatorExpr operator*(const OperatorExpr& a, const OperatorExpr& b);
OperatorExpr operator*(const Weight& w, const OperatorExpr& a);

/// Merges terms with equal words and radicands, drops zeros, orders terms.
OperatorExpr normalize(const OperatorExpr& op);
/// Rewrites x = (c + c^dag)/sqrt(2) and D = (c - c^dag)/sqrt(2), then normalizes.
OperatorExpr to_ladder(const OperatorExpr& op);

/// Text accepted by parse_operator.
std::string print(const OperatorExpr& op);

/// Applies the operator to a coefficient sequence; exact forms propagate.
/// x and D are lowered to ladder form first.
CoeffSequence apply(const OperatorExpr& op, const CoeffSequence& s);

/// Formal adjoint: conjugate scalars, reverse words, swap c and c^dag,
/// keep x and negate D.
OperatorExpr ddagger(const OperatorExpr& op);

struct AdjointReport {
  /// <X^ddag Phi, phi>_e
  EProductResult lhs;
  /// <Phi, X phi>_e
  EProductResult rhs;
  /// Largest |S_K(lhs) - S_K(rhs)| over the compared partial sums.
  Real max_partial_sum_deviation{64};
  Real difference{64};
  bool agree = false;
};

class InconclusivePairing : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Compares <X^ddag Phi, phi>_e against <Phi, X phi>_e, each classified
/// independently. Throws InconclusivePairing if either side has no value.
AdjointReport adjoint_check(const OperatorExpr& op, const Distribution& Phi, const Distribution& phi,
                            const SummationConfig& cfg);

}  // namespace eprod
