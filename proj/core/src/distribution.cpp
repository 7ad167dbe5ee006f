#include "eprod/distribution.hpp"

#include <map>
#include <memory>
#include <type_traits>

#include "eprod/hermite.hpp"
#include "eprod/special_functions.hpp"

namespace eprod {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

using Generator = CoeffSequence::Generator;
using GeneratorFactory = CoeffSequence::GeneratorFactory;

Weight sqrt_weight(Rational radicand) { return Weight{1, 0, std::move(radicand)}; }

bool same_radicand(const Weight& a, const Weight& b) { return a.radicand == b.radicand; }

Weight add_weights(const Weight& a, const Weight& b) { return Weight{a.re + b.re, a.im + b.im, a.radicand}; }

ExactComplex real_exact(SurdTerm t) { return ExactComplex(ExactSum(std::move(t))); }

// ------------------------------------------------------------------ streams

// Running table of e_m(0): e_0(0) = pi^(-1/4), e_{m+2}(0) = -sqrt((m+1)/(m+2)) e_m(0).
class ValuesAtZero {
 public:
  explicit ValuesAtZero(Bits bits) : bits_(bits) {}

  const Real& operator[](unsigned long m) {
    while (values_.size() <= m) {
      const unsigned long k = values_.size();
      if (k == 0) {
        values_.push_back(Real(1, bits_) / sqrt(sqrt(Real::pi(bits_))));
      } else if (k % 2 == 1) {
        values_.push_back(Real(bits_));
      } else {
        values_.push_back(-(sqrt(Real(Rational(k - 1, k), bits_)) * values_[k - 2]));
      }
    }
    return values_[m];
  }

 private:
  Bits bits_;
  std::vector<Real> values_;
};

// <e_n, delta^(k)> = (-1)^k e_n^(k)(0), expanding d/dx e_m = sqrt(m/2) e_{m-1} - sqrt((m+1)/2) e_{m+1}.
GeneratorFactory delta_factory(unsigned long k, Bits bits) {
  return [k, bits]() -> Generator {
    auto zero = std::make_shared<ValuesAtZero>(bits);
    auto roots = std::make_shared<std::vector<Real>>();  // roots[m] = sqrt(m/2)
    auto index = std::make_shared<unsigned long>(0);
    return [k, bits, zero, roots, index]() {
      const unsigned long n = (*index)++;
      auto root = [&](unsigned long m) -> const Real& {
        while (roots->size() <= m) roots->push_back(sqrt(Real(Rational(roots->size(), 2), bits)));
        return (*roots)[m];
      };
      std::map<unsigned long, Real> expansion;
      expansion.emplace(n, Real(1, bits));
      for (unsigned long step = 0; step < k; ++step) {
        std::map<unsigned long, Real> next;
        for (const auto& [m, w] : expansion) {
          if (m > 0) {
            auto [it, inserted] = next.try_emplace(m - 1, bits);
            it->second += w * root(m);
          }
          auto [it, inserted] = next.try_emplace(m + 1, bits);
          it->second -= w * root(m + 1);
        }
        expansion = std::move(next);
      }
      Real value(bits);
      for (const auto& [m, w] : expansion)
        if (m % 2 == 0) value.add_product(w, (*zero)[m]);
      if (k % 2 == 1) value = -value;
      return Complex(std::move(value));
    };
  };
}

// <e_n, x^p> from the Pfaff-transformed moment closed forms:
//   n = 2j,   p = 2q:   2^(q+1/2) Gamma(q+1/2) pi^(-1/4) sqrt(g_j) F(-q,-j;1/2;2)
//   n = 2j+1, p = 2q+1: 2^(q+2) Gamma(q+3/2) pi^(-1/4) sqrt((2j+1) g_j) F(-q,-j;3/2;2)
// with g_j = binom(2j, j) / 4^j.
GeneratorFactory monomial_factory(unsigned long p, Bits bits) {
  return [p, bits]() -> Generator {
    const unsigned long q = p / 2;
    const bool odd = p % 2 == 1;
    const Real pi_m4 = Real(1, bits) / sqrt(sqrt(Real::pi(bits)));
    Real lead = odd ? Real::pow2(static_cast<long>(q) + 2, bits) * gamma_half_integer(q + 1).to_real(bits)
                    : sqrt(Real(2, bits)) * Real::pow2(static_cast<long>(q), bits) * gamma_half_integer(q).to_real(bits);
    lead *= pi_m4;
    auto state = std::make_shared<std::pair<unsigned long, Real>>(0, Real(1, bits));  // (n, g_j)
    return [odd, q, bits, lead, state]() {
      const unsigned long n = state->first++;
      if ((n % 2 == 1) != odd) return Complex(bits);
      const unsigned long j = n / 2;
      Real& g = state->second;
      if (j > 0) {
        g *= static_cast<long>(2 * j - 1);
        g /= static_cast<long>(2 * j);
      }
      const Rational f = gauss_2f1_terminating(q, -Rational(j), odd ? Rational(3, 2) : Rational(1, 2), 2);
      Real value = lead * Real(f, bits);
      value *= odd ? sqrt(g * static_cast<long>(2 * j + 1)) : sqrt(g);
      return Complex(std::move(value));
    };
  };
}

// exp(gamma x): sqrt(2) pi^(1/4) e^(gamma^2/2) h_n, h_0 = 1, h_1 = sqrt(2) gamma,
// h_{n+1} = gamma sqrt(2/(n+1)) h_n + sqrt(n/(n+1)) h_{n-1}.
// cos/sin(omega x): the same with gamma = i omega; writing d_n = i^n h_n gives
// h_{n+1} = omega sqrt(2/(n+1)) h_n - sqrt(n/(n+1)) h_{n-1} and real h_n.
enum class Wave { Exp, Cos, Sin };

GeneratorFactory wave_factory(Wave kind, const Rational& rate, Bits bits) {
  return [kind, rate, bits]() -> Generator {
    const Real g(rate, bits);
    Real scale = sqrt(Real(2, bits)) * sqrt(sqrt(Real::pi(bits)));
    scale *= exp((kind == Wave::Exp ? g * g : -(g * g)) / 2);
    struct State {
      unsigned long n = 0;
      Real previous;
      Real current;
    };
    auto state = std::make_shared<State>(State{0, Real(bits), Real(1, bits)});
    const long sign = kind == Wave::Exp ? 1 : -1;
    return [kind, g, scale, state, sign, bits]() {
      const unsigned long n = state->n++;
      if (n > 0) {
        Real next = g * sqrt(Real(Rational(2, n), bits)) * state->current;
        if (n > 1) {
          Real back = sqrt(Real(Rational(n - 1, n), bits)) * state->previous;
          if (sign > 0) next += back;
          else next -= back;
        }
        state->previous = std::move(state->current);
        state->current = std::move(next);
      }
      const Real& h = state->current;
      switch (kind) {
        case Wave::Exp: return Complex(scale * h);
        case Wave::Cos:
          if (n % 2 == 1) return Complex(bits);
          return Complex((n / 2) % 2 == 0 ? scale * h : -(scale * h));
        default:
          if (n % 2 == 0) return Complex(bits);
          return Complex(((n - 1) / 2) % 2 == 0 ? scale * h : -(scale * h));
      }
    };
  };
}

GeneratorFactory quadrature_factory(const L2Sample& s, Bits bits) {
  return [f = s.function, nodes = s.nodes, label = s.label, bits]() -> Generator {
    const Bits work = bits + 64;
    const auto rule = GaussHermiteRule::get(nodes, work);
    const Real root_two = sqrt(Real(2, work));
    struct State {
      unsigned long n = 0;
      std::vector<Real> x;
      std::vector<Real> weighted;  // w_i f(x_i)
      std::vector<Real> previous;  // q_{n-1}(x_i)
      std::vector<Real> current;   // q_n(x_i)
    };
    auto state = std::make_shared<State>();
    const Real q0 = Real(1, work) / sqrt(sqrt(Real::pi(work)));
    for (unsigned i = 0; i < rule->size(); ++i) {
      Real x = root_two * rule->nodes()[i];
      Real v = f(x);
      if (!v.is_finite()) throw std::domain_error("quadrature of '" + label + "': non-finite sample");
      state->weighted.push_back(rule->weights()[i] * v.with_bits(work));
      state->x.push_back(std::move(x));
      state->previous.push_back(Real(work));
      state->current.push_back(q0);
    }
    return [state, root_two, bits, work]() {
      const unsigned long n = state->n++;
      if (n > 0) {
        const Real a = sqrt(Real(Rational(2, n), work));
        const Real b = sqrt(Real(Rational(n - 1, n), work));
        for (std::size_t i = 0; i < state->x.size(); ++i) {
          Real next = a * state->x[i] * state->current[i];
          next -= b * state->previous[i];
          state->previous[i] = std::move(state->current[i]);
          state->current[i] = std::move(next);
        }
      }
      Real sum(work);
      for (std::size_t i = 0; i < state->x.size(); ++i) sum.add_product(state->weighted[i], state->current[i]);
      return Complex((sum * root_two).with_bits(bits));
    };
  };
}

GeneratorFactory scaled_factory(GeneratorFactory inner, Complex factor) {
  return [inner = std::move(inner), factor]() -> Generator {
    return [g = inner(), factor]() mutable { return g() * factor; };
  };
}

// 1/sqrt(n!) applied per index is constant for phi_n, psi_n; see atom_factory.
Real inverse_root_factorial(unsigned long n, Bits bits) {
  return Real(1, bits) / sqrt(Real(factorial(n), bits));
}

GeneratorFactory atom_factory(const Atom& atom, Bits bits) {
  return std::visit(
      overloaded{
          [&](const DeltaDeriv& a) { return delta_factory(a.order, bits); },
          [&](const Monomial& a) { return monomial_factory(a.degree, bits); },
          [&](const NormalizedMonomial& a) {
            return scaled_factory(monomial_factory(a.n, bits), Complex(inverse_root_factorial(a.n, bits)));
          },
          [&](const NormalizedDeltaDeriv& a) {
            Real f = inverse_root_factorial(a.n, bits);
            if (a.n % 2 == 1) f = -f;
            return scaled_factory(delta_factory(a.n, bits), Complex(std::move(f)));
          },
          [&](const Eigenfunction& a) -> GeneratorFactory {
            const unsigned long m = a.n;
            return [m, bits]() -> Generator {
              auto index = std::make_shared<unsigned long>(0);
              return [m, bits, index]() { return Complex(Real((*index)++ == m ? 1 : 0, bits)); };
            };
          },
          [&](const ExpReal& a) { return wave_factory(Wave::Exp, a.rate, bits); },
          [&](const CosWave& a) { return wave_factory(Wave::Cos, a.frequency, bits); },
          [&](const SinWave& a) { return wave_factory(Wave::Sin, a.frequency, bits); },
          [&](const L2Sample& a) -> GeneratorFactory {
            if (a.is_callable()) return quadrature_factory(a, bits);
            std::vector<Complex> values;
            for (const auto& w : a.coefficients) values.push_back(w.to_complex(bits));
            auto shared = std::make_shared<const std::vector<Complex>>(std::move(values));
            return [shared, bits]() -> Generator {
              auto index = std::make_shared<unsigned long>(0);
              return [shared, bits, index]() {
                const unsigned long n = (*index)++;
                return n < shared->size() ? (*shared)[n] : Complex(bits);
              };
            };
          },
      },
      atom);
}

std::optional<unsigned long> atom_support(const Atom& atom) {
  if (const auto* e = std::get_if<Eigenfunction>(&atom)) return e->n + 1;
  if (const auto* s = std::get_if<L2Sample>(&atom); s && !s->is_callable()) return s->coefficients.size();
  return std::nullopt;
}

bool atom_has_exact(const Atom& atom) {
  return std::visit(overloaded{
                        [](const DeltaDeriv&) { return true; },
                        [](const Monomial&) { return true; },
                        [](const NormalizedMonomial&) { return true; },
                        [](const NormalizedDeltaDeriv&) { return true; },
                        [](const Eigenfunction&) { return true; },
                        [](const ExpReal& a) { return sgn(a.rate) == 0; },
                        [](const CosWave& a) { return sgn(a.frequency) == 0; },
                        [](const SinWave& a) { return sgn(a.frequency) == 0; },
                        [](const L2Sample& a) { return !a.is_callable(); },
                    },
                    atom);
}

ExactComplex atom_exact(const Atom& atom, unsigned long n) {
  auto monomial = [](unsigned long p, unsigned long n) {
    return SurdTerm(moment_integral(n, p)) * eigenfunction_norm(n);
  };
  auto delta = [](unsigned long k, unsigned long n) {
    SurdTerm v = eigenfunction_derivative_at_zero(n, k);
    return k % 2 == 1 ? -v : v;
  };
  auto inverse_root_factorial = [](unsigned long n) {
    return SurdTerm(ExactTerm(1), ExactTerm(Rational(mpz_class(1), factorial(n))));
  };
  return std::visit(
      overloaded{
          [&](const DeltaDeriv& a) { return real_exact(delta(a.order, n)); },
          [&](const Monomial& a) { return real_exact(monomial(a.degree, n)); },
          [&](const NormalizedMonomial& a) { return real_exact(monomial(a.n, n) * inverse_root_factorial(a.n)); },
          [&](const NormalizedDeltaDeriv& a) {
            SurdTerm v = delta(a.n, n) * inverse_root_factorial(a.n);
            return real_exact(a.n % 2 == 1 ? -v : v);
          },
          [&](const Eigenfunction& a) { return n == a.n ? real_exact(SurdTerm(ExactTerm(1))) : ExactComplex(); },
          [&](const ExpReal&) { return real_exact(monomial(0, n)); },
          [&](const CosWave&) { return real_exact(monomial(0, n)); },
          [&](const SinWave&) { return ExactComplex(); },
          [&](const L2Sample& a) { return n < a.coefficients.size() ? a.coefficients[n].to_exact() : ExactComplex(); },
      },
      atom);
}

}  // namespace

// ------------------------------------------------------------ Distribution

Distribution::Distribution(LinearCombo combo) : value_(std::move(combo)) {
  // Keep the flatness invariant: nested combinations cannot be expressed since
  // LinearCombo holds atoms only.
}

std::vector<std::pair<Weight, Atom>> Distribution::terms() const {
  if (is_combo()) return combo().terms;
  return {{Weight{}, atom()}};
}

Distribution operator+(const Distribution& a, const Distribution& b) {
  LinearCombo c{a.terms()};
  for (auto& t : b.terms()) c.terms.push_back(std::move(t));
  return Distribution(std::move(c));
}

Distribution operator*(const Weight& w, const Distribution& d) {
  LinearCombo c;
  for (auto& [weight, atom] : d.terms()) c.terms.emplace_back(w * weight, atom);
  return Distribution(std::move(c));
}

Distribution operator-(const Distribution& a, const Distribution& b) { return a + Weight::real(-1) * b; }

Distribution canonicalize(const Distribution& d) {
  std::vector<std::pair<Weight, Atom>> merged;
  auto add = [&](const Weight& w, const Atom& atom) {
    for (auto& [mw, ma] : merged) {
      if (ma == atom && same_radicand(mw, w)) {
        mw = add_weights(mw, w);
        return;
      }
    }
    merged.emplace_back(w, atom);
  };
  for (const auto& [w, atom] : d.terms()) {
    const auto* l2 = std::get_if<L2Sample>(&atom);
    if (l2 && !l2->is_callable()) {
      for (std::size_t n = 0; n < l2->coefficients.size(); ++n)
        if (!l2->coefficients[n].is_zero()) add(w * l2->coefficients[n], Eigenfunction{n});
      continue;
    }
    add(w, atom);
  }
  LinearCombo out;
  for (auto& [w, atom] : merged)
    if (!w.is_zero()) out.terms.emplace_back(std::move(w), std::move(atom));
  if (out.terms.size() == 1 && out.terms[0].first.is_one()) return Distribution(out.terms[0].second);
  return Distribution(std::move(out));
}

std::string print(const Atom& a) {
  return std::visit(overloaded{
                        [](const DeltaDeriv& v) {
                          return v.order == 0 ? std::string("delta") : "delta^(" + std::to_string(v.order) + ")";
                        },
                        [](const Monomial& v) {
                          return v.degree == 1 ? std::string("x") : "x^" + std::to_string(v.degree);
                        },
                        [](const NormalizedMonomial& v) { return "phi(" + std::to_string(v.n) + ")"; },
                        [](const NormalizedDeltaDeriv& v) { return "psi(" + std::to_string(v.n) + ")"; },
                        [](const Eigenfunction& v) { return "e(" + std::to_string(v.n) + ")"; },
                        [](const ExpReal& v) { return "exp(" + rational_to_string(v.rate) + ")"; },
                        [](const CosWave& v) { return "cos(" + rational_to_string(v.frequency) + ")"; },
                        [](const SinWave& v) { return "sin(" + rational_to_string(v.frequency) + ")"; },
                        [](const L2Sample& v) {
                          if (v.is_callable()) return "<" + v.label + ">";
                          std::string out = "l2[";
                          for (std::size_t i = 0; i < v.coefficients.size(); ++i)
                            out += (i ? ", " : "") + v.coefficients[i].to_string();
                          return out + "]";
                        },
                    },
                    a);
}

std::string print(const Distribution& d) {
  if (!d.is_combo()) return print(d.atom());
  const auto& terms = d.combo().terms;
  if (terms.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& [w, atom] = terms[i];
    const bool negative_real = sgn(w.im) == 0 && sgn(w.re) < 0;
    Weight shown = negative_real ? Weight{-w.re, w.im, w.radicand} : w;
    if (i > 0) out += negative_real ? " - " : " + ";
    else if (negative_real) out += "-";
    if (!shown.is_one()) out += shown.to_string() + "*";
    out += print(atom);
  }
  return out;
}

Parity parity(const Atom& a) {
  return std::visit(
      overloaded{
          [](const DeltaDeriv& v) { return v.order % 2 == 0 ? Parity::Even : Parity::Odd; },
          [](const Monomial& v) { return v.degree % 2 == 0 ? Parity::Even : Parity::Odd; },
          [](const NormalizedMonomial& v) { return v.n % 2 == 0 ? Parity::Even : Parity::Odd; },
          [](const NormalizedDeltaDeriv& v) { return v.n % 2 == 0 ? Parity::Even : Parity::Odd; },
          [](const Eigenfunction& v) { return v.n % 2 == 0 ? Parity::Even : Parity::Odd; },
          [](const ExpReal& v) { return sgn(v.rate) == 0 ? Parity::Even : Parity::Mixed; },
          [](const CosWave&) { return Parity::Even; },
          [](const SinWave&) { return Parity::Odd; },
          [](const L2Sample& v) {
            if (v.is_callable()) return Parity::Mixed;
            bool even = true;
            bool odd = true;
            for (std::size_t n = 0; n < v.coefficients.size(); ++n) {
              if (v.coefficients[n].is_zero()) continue;
              (n % 2 == 0 ? odd : even) = false;
            }
            return even ? Parity::Even : (odd ? Parity::Odd : Parity::Mixed);
          },
      },
      a);
}

Parity parity(const Distribution& d) {
  const auto terms = d.terms();
  if (terms.empty()) return Parity::Even;
  Parity p = parity(terms.front().second);
  for (const auto& [w, atom] : terms) p = combine(p, parity(atom));
  return p;
}

bool has_exact_coefficients(const Distribution& d) {
  for (const auto& [w, atom] : d.terms())
    if (!atom_has_exact(atom)) return false;
  return true;
}

std::optional<ExactComplex> coeff_exact(const Distribution& d, unsigned long n) {
  if (!has_exact_coefficients(d)) return std::nullopt;
  ExactComplex sum;
  for (const auto& [w, atom] : d.terms()) {
    if (vanishes_by_parity(parity(atom), n)) continue;
    sum += w.to_exact() * atom_exact(atom, n);
  }
  return sum;
}

CoeffSequence coeff_sequence(const Distribution& d, Bits bits, unsigned long memo_cap) {
  const auto terms = d.terms();
  std::vector<GeneratorFactory> factories;
  std::vector<Complex> weights;
  std::optional<unsigned long> support = 0;
  for (const auto& [w, atom] : terms) {
    factories.push_back(atom_factory(atom, bits));
    weights.push_back(w.to_complex(bits));
    const auto s = atom_support(atom);
    if (!s) support.reset();
    else if (support) support = std::max(*support, *s);
  }
  GeneratorFactory factory = [factories, weights, bits]() -> Generator {
    auto generators = std::make_shared<std::vector<Generator>>();
    for (const auto& f : factories) generators->push_back(f());
    return [generators, weights, bits]() {
      Complex sum(bits);
      for (std::size_t i = 0; i < generators->size(); ++i) {
        Complex v = (*generators)[i]();
        if (!v.is_zero()) sum += weights[i] * v;
      }
      return sum;
    };
  };
  CoeffSequence::Options options;
  options.parity = parity(d);
  options.support = support;
  options.memo_cap = memo_cap;
  CoeffSequence::ExactGenerator exact;
  if (has_exact_coefficients(d)) exact = [d](unsigned long n) { return *coeff_exact(d, n); };
  return CoeffSequence(std::move(factory), bits, options, std::move(exact));
}

Complex coeff(const Distribution& d, unsigned long n, Bits bits) { return coeff_sequence(d, bits).at(n); }

Real sample(const Distribution& d, const Real& x) {
  const Bits bits = x.bits();
  Real sum(bits);
  for (const auto& [w, atom] : d.terms()) {
    if (sgn(w.im) != 0) throw UnsupportedVariant("sample: complex weight in " + print(d));
    Real v = std::visit(
        overloaded{
            [&](const DeltaDeriv&) -> Real { throw UnsupportedVariant("sample: delta has no pointwise value"); },
            [&](const NormalizedDeltaDeriv&) -> Real {
              throw UnsupportedVariant("sample: psi has no pointwise value");
            },
            [&](const Monomial& a) { return pow(x, static_cast<long>(a.degree)); },
            [&](const NormalizedMonomial& a) { return pow(x, static_cast<long>(a.n)) * inverse_root_factorial(a.n, bits); },
            [&](const Eigenfunction& a) { return eigenfunction_eval(a.n, x); },
            [&](const ExpReal& a) { return exp(Real(a.rate, bits) * x); },
            [&](const CosWave& a) { return cos(Real(a.frequency, bits) * x); },
            [&](const SinWave& a) { return sin(Real(a.frequency, bits) * x); },
            [&](const L2Sample& a) {
              if (a.is_callable()) return a.function(x);
              Real s(bits);
              for (std::size_t n = 0; n < a.coefficients.size(); ++n) {
                if (sgn(a.coefficients[n].im) != 0) throw UnsupportedVariant("sample: complex coefficient");
                s += a.coefficients[n].to_complex(bits).re * eigenfunction_eval(n, x);
              }
              return s;
            },
        },
        atom);
    sum += w.to_complex(bits).re * v;
  }
  return sum;
}

// ------------------------------------------------------------- weak rules

namespace {

LinearCombo weak_atom(WeakOp op, const Atom& atom) {
  const bool deriv = op == WeakOp::Derivative;
  LinearCombo out;
  auto push = [&](Weight w, Atom a) { out.terms.emplace_back(std::move(w), std::move(a)); };
  std::visit(
      overloaded{
          [&](const DeltaDeriv& a) {
            if (deriv) push(Weight{}, DeltaDeriv{a.order + 1});
            else if (a.order > 0) push(Weight::real(-Rational(a.order)), DeltaDeriv{a.order - 1});
          },
          [&](const Monomial& a) {
            if (!deriv) push(Weight{}, Monomial{a.degree + 1});
            else if (a.degree > 0) push(Weight::real(Rational(a.degree)), Monomial{a.degree - 1});
          },
          [&](const NormalizedMonomial& a) {
            // x phi_k = sqrt(k+1) phi_{k+1};  phi_k' = sqrt(k) phi_{k-1}
            if (!deriv) push(sqrt_weight(a.n + 1), NormalizedMonomial{a.n + 1});
            else if (a.n > 0) push(sqrt_weight(a.n), NormalizedMonomial{a.n - 1});
          },
          [&](const NormalizedDeltaDeriv& a) {
            // psi_k' = -sqrt(k+1) psi_{k+1};  x psi_k = sqrt(k) psi_{k-1}
            if (deriv) push(Weight::real(-1) * sqrt_weight(a.n + 1), NormalizedDeltaDeriv{a.n + 1});
            else if (a.n > 0) push(sqrt_weight(a.n), NormalizedDeltaDeriv{a.n - 1});
          },
          [&](const Eigenfunction& a) {
            // x e_n = (sqrt(n) e_{n-1} + sqrt(n+1) e_{n+1}) / sqrt(2), d/dx with a minus sign
            if (a.n > 0) push(sqrt_weight(Rational(a.n, 2)), Eigenfunction{a.n - 1});
            push(Weight::real(deriv ? -1 : 1) * sqrt_weight(Rational(a.n + 1, 2)), Eigenfunction{a.n + 1});
          },
          [&](const ExpReal& a) {
            if (!deriv) throw UnsupportedVariant("weak_apply: x*exp(gamma x) has no symbolic form");
            push(Weight::real(a.rate), a);
          },
          [&](const CosWave& a) {
            if (!deriv) throw UnsupportedVariant("weak_apply: x*cos(omega x) has no symbolic form");
            push(Weight::real(-a.frequency), SinWave{a.frequency});
          },
          [&](const SinWave& a) {
            if (!deriv) throw UnsupportedVariant("weak_apply: x*sin(omega x) has no symbolic form");
            push(Weight::real(a.frequency), CosWave{a.frequency});
          },
          [&](const L2Sample& a) {
            if (a.is_callable()) throw UnsupportedVariant("weak_apply: callable L2 sample '" + a.label + "'");
          },
      },
      atom);
  return out;
}

}  // namespace

Distribution weak_apply(WeakOp op, const Distribution& d) {
  LinearCombo out;
  for (const auto& [w, atom] : canonicalize(d).terms()) {
    for (auto& [w2, a2] : weak_atom(op, atom).terms) out.terms.emplace_back(w * w2, std::move(a2));
  }
  return canonicalize(Distribution(std::move(out)));
}

Distribution number_operator(const Distribution& d) {
  return weak_apply(WeakOp::MultiplyX, weak_apply(WeakOp::Derivative, d));
}

Distribution number_operator_adjoint(const Distribution& d) {
  return canonicalize(Weight::real(-1) * weak_apply(WeakOp::Derivative, weak_apply(WeakOp::MultiplyX, d)));
}

}  // namespace eprod
