#include "eprod/coeff_sequence.hpp"

#include <mutex>
#include <vector>

namespace eprod {

Parity combine(Parity a, Parity b) { return a == b ? a : Parity::Mixed; }

Parity product_parity(Parity a, Parity b) {
  if (a == Parity::Mixed || b == Parity::Mixed) return Parity::Mixed;
  return a == b ? Parity::Even : Parity::Odd;
}

bool vanishes_by_parity(Parity p, unsigned long n) {
  return (p == Parity::Even && n % 2 == 1) || (p == Parity::Odd && n % 2 == 0);
}

const char* to_string(Parity p) {
  switch (p) {
    case Parity::Even: return "even";
    case Parity::Odd: return "odd";
    default: return "mixed";
  }
}

struct CoeffSequence::State {
  GeneratorFactory factory;
  Bits bits;
  Options options;
  ExactGenerator exact;

  std::mutex mutex;
  std::vector<Complex> memo;
  Generator generator;
  unsigned long position = 0;  // next index the generator will produce
};

CoeffSequence::CoeffSequence(GeneratorFactory factory, Bits bits, Options options, ExactGenerator exact)
    : state_(std::make_shared<State>()) {
  state_->factory = std::move(factory);
  state_->bits = bits;
  state_->options = options;
  state_->exact = std::move(exact);
}

bool CoeffSequence::has_exact() const { return static_cast<bool>(state_->exact); }
Bits CoeffSequence::bits() const { return state_->bits; }
Parity CoeffSequence::parity() const { return state_->options.parity; }
std::optional<unsigned long> CoeffSequence::support() const { return state_->options.support; }

Complex CoeffSequence::at(unsigned long n) const {
  State& s = *state_;
  if (s.options.support && n >= *s.options.support) return Complex(s.bits);
  if (vanishes_by_parity(s.options.parity, n)) return Complex(s.bits);

  std::lock_guard lock(s.mutex);
  if (n < s.memo.size()) return s.memo[n];
  if (!s.generator || s.position > n) {
    // Past the memo cap and behind the generator: restart from the beginning.
    s.generator = s.factory();
    s.position = 0;
  }
  const bool unbounded = s.options.memo_cap == 0;
  for (;;) {
    Complex value = s.generator();
    const unsigned long index = s.position++;
    if (index == s.memo.size() && (unbounded || s.memo.size() < s.options.memo_cap)) s.memo.push_back(value);
    if (index == n) return value;
  }
}

std::vector<Complex> CoeffSequence::prefix(unsigned long count) const {
  std::vector<Complex> out;
  out.reserve(count);
  if (count > 0) at(count - 1);
  for (unsigned long n = 0; n < count; ++n) out.push_back(at(n));
  return out;
}

std::optional<ExactComplex> CoeffSequence::exact(unsigned long n) const {
  if (!state_->exact) return std::nullopt;
  if (state_->options.support && n >= *state_->options.support) return ExactComplex();
  if (vanishes_by_parity(state_->options.parity, n)) return ExactComplex();
  return state_->exact(n);
}

CoeffSequence CoeffSequence::map(std::function<Complex(unsigned long, const Complex&)> f,
                                 std::function<ExactComplex(unsigned long, const ExactComplex&)> exact_f) const {
  const CoeffSequence source = *this;
  GeneratorFactory factory = [source, f]() -> Generator {
    auto index = std::make_shared<unsigned long>(0);
    return [source, f, index]() {
      const unsigned long n = (*index)++;
      return f(n, source.at(n));
    };
  };
  ExactGenerator exact;
  if (has_exact() && exact_f) exact = [source, exact_f](unsigned long n) { return exact_f(n, *source.exact(n)); };
  Options options = state_->options;
  options.parity = Parity::Mixed;
  options.support.reset();
  return CoeffSequence(std::move(factory), state_->bits, options, std::move(exact));
}

CoeffSequence finite_sequence(std::vector<Complex> values, Bits bits, std::vector<ExactComplex> exact_values) {
  const auto shared = std::make_shared<const std::vector<Complex>>(std::move(values));
  CoeffSequence::GeneratorFactory factory = [shared, bits]() -> CoeffSequence::Generator {
    auto index = std::make_shared<unsigned long>(0);
    return [shared, bits, index]() {
      const unsigned long n = (*index)++;
      return n < shared->size() ? (*shared)[n] : Complex(bits);
    };
  };
  CoeffSequence::Options options;
  options.support = shared->size();
  bool even = true;
  bool odd = true;
  for (std::size_t n = 0; n < shared->size(); ++n) {
    if ((*shared)[n].is_zero()) continue;
    (n % 2 == 0 ? odd : even) = false;
  }
  options.parity = even ? Parity::Even : (odd ? Parity::Odd : Parity::Mixed);
  CoeffSequence::ExactGenerator exact;
  if (!exact_values.empty()) {
    auto exact_shared = std::make_shared<const std::vector<ExactComplex>>(std::move(exact_values));
    exact = [exact_shared](unsigned long n) {
      return n < exact_shared->size() ? (*exact_shared)[n] : ExactComplex();
    };
  }
  return CoeffSequence(std::move(factory), bits, options, std::move(exact));
}

}  // namespace eprod
