#pragma once

// Symbolic tempered distributions and their Hermite coefficients <e_n, F>.

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "eprod/coeff_sequence.hpp"
#include "eprod/exact.hpp"
#include "eprod/quadrature.hpp"
#include "eprod/real.hpp"

namespace eprod {

/// delta^(k): f -> (-1)^k f^(k)(0)
struct DeltaDeriv {
  unsigned long order = 0;
  friend bool operator==(const DeltaDeriv&, const DeltaDeriv&) = default;
};
/// x^n
struct Monomial {
  unsigned long degree = 0;
  friend bool operator==(const Monomial&, const Monomial&) = default;
};
/// phi_n = x^n / sqrt(n!)
struct NormalizedMonomial {
  unsigned long n = 0;
  friend bool operator==(const NormalizedMonomial&, const NormalizedMonomial&) = default;
};
/// psi_n = (-1)^n delta^(n) / sqrt(n!)
struct NormalizedDeltaDeriv {
  unsigned long n = 0;
  friend bool operator==(const NormalizedDeltaDeriv&, const NormalizedDeltaDeriv&) = default;
};
/// The basis function e_n itself.
struct Eigenfunction {
  unsigned long n = 0;
  friend bool operator==(const Eigenfunction&, const Eigenfunction&) = default;
};
/// exp(rate x)
struct ExpReal {
  Rational rate;
  friend bool operator==(const ExpReal&, const ExpReal&) = default;
};
/// cos(frequency x)
struct CosWave {
  Rational frequency;
  friend bool operator==(const CosWave&, const CosWave&) = default;
};
/// sin(frequency x)
struct SinWave {
  Rational frequency;
  friend bool operator==(const SinWave&, const SinWave&) = default;
};
/// An L2 function given either by finitely many Hermite coefficients or by a
/// real callable integrated against e_n by Gauss-Hermite quadrature.
struct L2Sample {
  std::vector<Weight> coefficients;
  RealFunction function;
  std::string label = "f";
  unsigned nodes = 200;

  static L2Sample from_coefficients(std::vector<Weight> c) { return L2Sample{std::move(c), {}, "f", 200}; }
  static L2Sample from_function(RealFunction f, std::string label, unsigned nodes = 200) {
    return L2Sample{{}, std::move(f), std::move(label), nodes};
  }
  bool is_callable() const { return static_cast<bool>(function); }

  friend bool operator==(const L2Sample& a, const L2Sample& b) {
    return a.is_callable() == b.is_callable() && a.coefficients == b.coefficients && a.label == b.label &&
           a.nodes == b.nodes;
  }
};

using Atom = std::variant<DeltaDeriv, Monomial, NormalizedMonomial, NormalizedDeltaDeriv, Eigenfunction, ExpReal,
                          CosWave, SinWave, L2Sample>;

/// Flat linear combination; never contains another combination.
struct LinearCombo {
  std::vector<std::pair<Weight, Atom>> terms;
  friend bool operator==(const LinearCombo&, const LinearCombo&) = default;
};

class Distribution {
 public:
  Distribution() : value_(LinearCombo{}) {}
  template <typename T>
    requires std::is_constructible_v<Atom, T>
  Distribution(T atom) : value_(Atom(std::move(atom))) {}
  Distribution(LinearCombo combo);

  bool is_combo() const { return std::holds_alternative<LinearCombo>(value_); }
  const Atom& atom() const { return std::get<Atom>(value_); }
  const LinearCombo& combo() const { return std::get<LinearCombo>(value_); }

  /// Terms as (weight, atom), a single atom giving one unit-weight term.
  std::vector<std::pair<Weight, Atom>> terms() const;

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  std::variant<Atom, LinearCombo> value_;
};

Distribution operator+(const Distribution& a, const Distribution& b);
Distribution operator-(const Distribution& a, const Distribution& b);
Distribution operator*(const Weight& w, const Distribution& d);

/// Flatten, merge equal atoms, drop zero weights, unwrap single unit terms.
Distribution canonicalize(const Distribution& d);

/// Grammar text accepted by parse_distribution.
std::string print(const Distribution& d);
std::string print(const Atom& a);

Parity parity(const Distribution& d);
Parity parity(const Atom& a);

/// True when every coefficient has an exact closed form.
bool has_exact_coefficients(const Distribution& d);

/// <e_n, F> at the given precision.
Complex coeff(const Distribution& d, unsigned long n, Bits bits);
/// Exact <e_n, F>, when available.
std::optional<ExactComplex> coeff_exact(const Distribution& d, unsigned long n);

/// Memoized coefficient stream. memo_cap 0 means unbounded.
CoeffSequence coeff_sequence(const Distribution& d, Bits bits, unsigned long memo_cap = 0);

/// The pointwise value F(x) for distributions that are functions; throws
/// UnsupportedVariant for delta-type terms.
Real sample(const Distribution& d, const Real& x);

class UnsupportedVariant : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class WeakOp { MultiplyX, Derivative };

/// Symbolic x*F or dF/dx in the weak sense.
Distribution weak_apply(WeakOp op, const Distribution& d);

/// N = x d/dx and N^dag = -d/dx x.
Distribution number_operator(const Distribution& d);
Distribution number_operator_adjoint(const Distribution& d);

}  // namespace eprod
