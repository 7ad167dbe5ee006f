#pragma once

// A memoized sequence n -> <e_n, F>.

#include <functional>
#include <memory>
#include <optional>

#include "eprod/exact.hpp"
#include "eprod/real.hpp"

namespace eprod {

enum class Parity { Even, Odd, Mixed };

/// Parity of the index set carrying nonzero coefficients.
Parity combine(Parity a, Parity b);
/// Parity of the product of two functions with parities a and b.
Parity product_parity(Parity a, Parity b);
/// True when index n is forced to zero by parity p.
bool vanishes_by_parity(Parity p, unsigned long n);
const char* to_string(Parity p);

class CoeffSequence {
 public:
  /// Stateful generator producing entries 0, 1, 2, ... in order.
  using Generator = std::function<Complex()>;
  using GeneratorFactory = std::function<Generator()>;
  /// Random-access exact entries.
  using ExactGenerator = std::function<ExactComplex(unsigned long)>;

  struct Options {
    Parity parity = Parity::Mixed;
    /// Entries at n >= support are exactly zero.
    std::optional<unsigned long> support;
    /// Maximum number of memoized entries; 0 means unbounded.
    unsigned long memo_cap = 0;
  };

  CoeffSequence(GeneratorFactory factory, Bits bits, Options options, ExactGenerator exact = {});

  Complex at(unsigned long n) const;
  /// Entries 0..count-1, computed in a single pass.
  std::vector<Complex> prefix(unsigned long count) const;
  bool has_exact() const;
  std::optional<ExactComplex> exact(unsigned long n) const;

  Bits bits() const;
  Parity parity() const;
  std::optional<unsigned long> support() const;

  /// Entries with a fresh factory applied termwise; memo is not shared.
  CoeffSequence map(std::function<Complex(unsigned long, const Complex&)> f,
                    std::function<ExactComplex(unsigned long, const ExactComplex&)> exact_f) const;

 private:
  struct State;
  std::shared_ptr<State> state_;
};

/// Sequence from an explicit finite list of values.
CoeffSequence finite_sequence(std::vector<Complex> values, Bits bits,
                              std::vector<ExactComplex> exact_values = {});

}  // namespace eprod
