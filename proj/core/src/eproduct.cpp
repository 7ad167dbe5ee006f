#include "eprod/eproduct.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "eprod/special_functions.hpp"

namespace eprod {

const char* to_string(Status s) {
  switch (s) {
    case Status::ZeroByParity: return "ZeroByParity";
    case Status::AbsolutelyConvergent: return "AbsolutelyConvergent";
    case Status::Convergent: return "Convergent";
    case Status::Divergent: return "Divergent";
    case Status::AbelSummable: return "AbelSummable";
    default: return "Inconclusive";
  }
}

bool has_value(Status s) { return s != Status::Divergent && s != Status::Inconclusive; }

namespace {

Real scale_of(const Complex& z) {
  Real a = abs(z);
  if (a < 1) return Real(1, z.bits());
  return a;
}

bool close(const Complex& a, const Complex& b, const Real& tol) { return abs(a - b) <= tol * scale_of(b); }

std::vector<Complex> running_sums(const std::vector<Complex>& u, Bits bits) {
  std::vector<Complex> s;
  s.reserve(u.size());
  Complex acc(bits);
  for (const auto& t : u) {
    acc += t;
    s.push_back(acc);
  }
  return s;
}

// The real component carrying all terms, if the terms are real or purely
// imaginary.
std::optional<std::vector<Real>> single_component(const std::vector<Complex>& u) {
  bool real = true;
  bool imaginary = true;
  for (const auto& t : u) {
    if (!t.im.is_zero()) real = false;
    if (!t.re.is_zero()) imaginary = false;
  }
  if (!real && !imaginary) return std::nullopt;
  std::vector<Real> v;
  v.reserve(u.size());
  for (const auto& t : u) v.push_back(real ? t.re : t.im);
  return v;
}

bool alternating_decay(const std::vector<Real>& v, std::size_t first, const Real& margin) {
  const std::size_t last = v.size() - 1;
  if (last < first + 8) return false;
  for (std::size_t j = first; j < last; ++j) {
    if (v[j].is_zero() || v[j].sign() == v[j + 1].sign()) return false;
    if (abs(v[j + 1]) > abs(v[j])) return false;
  }
  const double slope = (v[last].log10_abs() - v[first].log10_abs()) /
                       (std::log10(static_cast<double>(last)) - std::log10(static_cast<double>(first)));
  return slope < -margin.to_double();
}

void adopt_abel(Diagnostics& d, const AbelResult& a) {
  d.abel_trace = a.trace;
  d.wynn_estimate = a.wynn;
  d.working_digits = a.working_digits;
  d.terms_used = std::max(d.terms_used, a.terms_used);
}

}  // namespace

EProductResult classify_and_sum(const Series& series, const SummationConfig& cfg) {
  cfg.validate();
  EProductResult result;
  Diagnostics& diag = result.diagnostics;
  const Bits bits = cfg.bits();
  const Real tol = cfg.tol(bits);
  const Real margin(cfg.divergence_margin, bits);
  diag.working_digits = cfg.digits + 20;

  if (series.zero_by_parity) {
    result.status = Status::ZeroByParity;
    result.value = Complex(bits);
    result.exact_value = ExactComplex();
    diag.certificate = "parity";
    return result;
  }

  const CoeffSequence terms = series.terms(bits);
  if (series.support) {
    const std::vector<Complex> u = terms.prefix(*series.support);
    diag.partial_sums = running_sums(u, bits);
    diag.terms_used = u.size();
    result.status = Status::AbsolutelyConvergent;
    result.value = diag.partial_sums.empty() ? Complex(bits) : diag.partial_sums.back();
    if (series.exact) {
      ExactComplex sum;
      for (unsigned long j = 0; j < *series.support; ++j) sum += series.exact(j);
      result.exact_value = sum;
    }
    diag.certificate = "finite support";
    return result;
  }

  const unsigned long inspect = std::max<unsigned long>(16, series.inspect ? series.inspect : cfg.max_terms);
  std::vector<Complex> u = terms.prefix(inspect);
  diag.partial_sums = running_sums(u, bits);
  diag.terms_used = u.size();
  std::vector<Real> magnitudes;
  magnitudes.reserve(u.size());
  for (const auto& t : u) magnitudes.push_back(abs(t));

  // Ratio test, summing on until the geometric tail bound is below tolerance.
  bool tail_vanishes = true;
  for (std::size_t j = u.size() * 3 / 4; j < u.size(); ++j)
    if (!u[j].is_zero()) tail_vanishes = false;
  diag.ratio_estimate = ratio_estimate(magnitudes);
  if (tail_vanishes) {
    result.status = Status::AbsolutelyConvergent;
    result.value = diag.partial_sums.back();
    diag.certificate = "vanishing tail";
    diag.low_confidence = true;
    diag.notes.push_back("the last quarter of the inspected terms is exactly zero");
    return result;
  }
  if (diag.ratio_estimate && *diag.ratio_estimate < Real(1, bits) - margin) {
    const Real rho = *diag.ratio_estimate;
    auto tail_bound = [&] { return magnitudes.back() * rho / (Real(1, bits) - rho); };
    while (tail_bound() > tol * scale_of(diag.partial_sums.back()) && u.size() < 4 * inspect) {
      const std::size_t old = u.size();
      u = terms.prefix(2 * old);
      for (std::size_t j = old; j < u.size(); ++j) {
        magnitudes.push_back(abs(u[j]));
        diag.partial_sums.push_back(diag.partial_sums.back() + u[j]);
      }
    }
    diag.terms_used = u.size();
    if (tail_bound() > tol * scale_of(diag.partial_sums.back())) {
      diag.low_confidence = true;
      diag.notes.push_back("geometric tail bound above tolerance after " + std::to_string(u.size()) + " terms");
    }
    result.status = Status::AbsolutelyConvergent;
    result.value = diag.partial_sums.back();
    diag.certificate = "ratio";
    return result;
  }

  // Stabilization of the partial sums.
  const std::size_t half = u.size() / 2;
  {
    Real largest_tail(bits);
    for (std::size_t j = half; j < u.size(); ++j) largest_tail = max(largest_tail, magnitudes[j]);
    const Complex& total = diag.partial_sums.back();
    if (close(diag.partial_sums[half], total, tol) && largest_tail <= tol * scale_of(total)) {
      result.status = Status::Convergent;
      result.value = total;
      diag.certificate = "stabilized";
      return result;
    }
  }

  const std::optional<std::vector<Real>> component = single_component(u);

  // Alternating terms decaying in magnitude.
  if (component && alternating_decay(*component, half, margin)) {
    std::vector<Complex> head(diag.partial_sums.begin(),
                              diag.partial_sums.begin() + std::min<std::size_t>(cfg.wynn_terms, u.size()));
    const WynnResult wynn = wynn_epsilon(head);
    result.status = Status::Convergent;
    result.value = wynn.value;
    diag.wynn_estimate = wynn.value;
    diag.certificate = "alternating";
    const AbelResult abel = abel_sum(series.terms, cfg);
    adopt_abel(diag, abel);
    diag.wynn_estimate = wynn.value;
    if (!abel.converged) {
      diag.notes.push_back("Abel cross-check: " + abel.failure);
    } else if (!close(*abel.value, wynn.value, tol * 10)) {
      diag.low_confidence = true;
      diag.notes.push_back("Abel cross-check disagrees with the Wynn value");
    }
    return result;
  }

  // Single-signed real tail: domination by a known divergent series, then Raabe.
  const std::size_t window = u.size() / 8 + 1;
  bool single_signed = static_cast<bool>(component);
  if (single_signed) {
    const int sign = (*component)[window].sign();
    for (std::size_t j = window; j < u.size() && single_signed; ++j)
      single_signed = sign != 0 && (*component)[j].sign() == sign;
  }

  if (series.nonnegative && series.reference && component) {
    const std::vector<Complex> v = series.reference(bits).prefix(u.size());
    std::optional<Real> c;
    bool valid = true;
    std::vector<Real> v_re;
    v_re.reserve(v.size());
    for (std::size_t j = 0; j < u.size() && valid; ++j) {
      v_re.push_back(v[j].re);
      if (v[j].re.sign() <= 0 || (*component)[j].sign() < 0) {
        valid = v[j].re.sign() == 0 && (*component)[j].sign() >= 0;
        continue;
      }
      Real ratio = (*component)[j] / v[j].re;
      if (!c || ratio < *c) c = std::move(ratio);
    }
    // The ratio must not decay along the window, else no bound survives the limit.
    const std::size_t last = u.size() - 1;
    const bool holds_on = valid && v[half].re.sign() > 0 && v[last].re.sign() > 0 &&
                          (*component)[last] / v[last].re >= (*component)[half] / v[half].re;
    if (valid && c && c->sign() > 0 && holds_on) {
      bool reference_positive = true;
      for (std::size_t j = window; j < v_re.size(); ++j) reference_positive = reference_positive && v_re[j].sign() > 0;
      if (reference_positive && raabe_test(v_re, window, v_re.size()) < Real(1, bits) - margin) {
        result.status = Status::Divergent;
        diag.domination_constant = c;
        diag.certificate = "domination";
        diag.notes.push_back("terms dominate " + series.reference_label + " termwise with constant " +
                             c->to_string(6));
        return result;
      }
    }
  }

  if (single_signed) {
    std::vector<Real> positive;
    positive.reserve(u.size());
    for (const auto& x : *component) positive.push_back(abs(x));
    diag.raabe_estimate = raabe_test(positive, window, positive.size());
    if (*diag.raabe_estimate < Real(1, bits) - margin) {
      result.status = Status::Divergent;
      diag.certificate = "raabe";
      return result;
    }
  }

  const AbelResult abel = abel_sum(series.terms, cfg);
  adopt_abel(diag, abel);
  if (abel.converged && abel.wynn_agrees) {
    result.status = Status::AbelSummable;
    result.value = abel.value;
    diag.certificate = "abel";
    return result;
  }
  if (!abel.converged) diag.notes.push_back("Abel: " + abel.failure);
  else diag.notes.push_back("Abel value and Wynn estimate disagree");

  if (abs(diag.partial_sums.back()) > Real(cfg.partial_sum_cap, bits)) {
    result.status = Status::Divergent;
    diag.low_confidence = true;
    diag.certificate = "partial-sum cap";
    return result;
  }
  result.status = Status::Inconclusive;
  return result;
}

// ---------------------------------------------------------------- series

Series eproduct_series(const std::function<CoeffSequence(Bits)>& F, const std::function<CoeffSequence(Bits)>& G,
                       const SummationConfig& cfg) {
  Series s;
  const CoeffSequence left = F(64);
  const CoeffSequence right = G(64);
  const Parity pl = left.parity();
  const Parity pr = right.parity();
  if (pl != Parity::Mixed && pr != Parity::Mixed && pl != pr) s.zero_by_parity = true;

  const Parity lattice = pl != Parity::Mixed ? pl : pr;
  const unsigned long stride = lattice == Parity::Mixed ? 1 : 2;
  const unsigned long offset = lattice == Parity::Odd ? 1 : 0;

  std::optional<unsigned long> raw_support;
  for (const auto& sup : {left.support(), right.support()})
    if (sup) raw_support = raw_support ? std::min(*raw_support, *sup) : *sup;
  if (raw_support) s.support = *raw_support > offset ? (*raw_support - offset + stride - 1) / stride : 0;

  s.terms = [F, G, offset, stride](Bits bits) {
    const CoeffSequence l = F(bits);
    const CoeffSequence r = G(bits);
    CoeffSequence::GeneratorFactory factory = [l, r, offset, stride]() -> CoeffSequence::Generator {
      auto j = std::make_shared<unsigned long>(0);
      return [l, r, offset, stride, j]() {
        const unsigned long n = offset + stride * (*j)++;
        return conj(l.at(n)) * r.at(n);
      };
    };
    CoeffSequence::ExactGenerator exact;
    if (l.has_exact() && r.has_exact())
      exact = [l, r, offset, stride](unsigned long j) {
        const unsigned long n = offset + stride * j;
        return conj(*l.exact(n)) * *r.exact(n);
      };
    return CoeffSequence(std::move(factory), bits, CoeffSequence::Options{}, std::move(exact));
  };
  if (left.has_exact() && right.has_exact()) {
    const auto terms = s.terms;
    s.exact = [terms](unsigned long j) { return *terms(64).exact(j); };
  }
  s.inspect = std::max<unsigned long>(16, cfg.max_terms / stride);
  return s;
}

namespace {

std::function<CoeffSequence(Bits)> stream_of(const Distribution& d) {
  return [d](Bits bits) { return coeff_sequence(d, bits, 256); };
}

}  // namespace

Series eproduct_series(const Distribution& F, const Distribution& G, const SummationConfig& cfg) {
  const Distribution f = canonicalize(F);
  const Distribution g = canonicalize(G);
  Series s = eproduct_series(stream_of(f), stream_of(g), cfg);
  if (f == g) {
    s.nonnegative = true;
    const Distribution delta = DeltaDeriv{0};
    if (!(f == delta)) {
      s.reference = eproduct_series(delta, delta, cfg).terms;
      s.reference_label = "<delta,delta>_e";
    }
  }
  return s;
}

EProductResult classify_and_sum(const Distribution& F, const Distribution& G, const SummationConfig& cfg) {
  return classify_and_sum(eproduct_series(F, G, cfg), cfg);
}

std::vector<Complex> partial_sums(const Distribution& F, const Distribution& G, unsigned long N, Bits bits) {
  const CoeffSequence l = coeff_sequence(F, bits);
  const CoeffSequence r = coeff_sequence(G, bits);
  std::vector<Complex> out;
  out.reserve(N);
  Complex acc(bits);
  for (unsigned long n = 0; n < N; ++n) {
    acc += conj(l.at(n)) * r.at(n);
    out.push_back(acc);
  }
  return out;
}

std::vector<ExactComplex> exact_partial_sums(const Distribution& F, const Distribution& G, unsigned long N) {
  if (!has_exact_coefficients(F) || !has_exact_coefficients(G))
    throw std::invalid_argument("exact_partial_sums: no exact coefficients for " +
                                print(has_exact_coefficients(F) ? G : F));
  std::vector<ExactComplex> out;
  out.reserve(N);
  ExactComplex acc;
  for (unsigned long n = 0; n < N; ++n) {
    acc += conj(*coeff_exact(F, n)) * *coeff_exact(G, n);
    out.push_back(acc);
  }
  return out;
}

// ---------------------------------------------------------- a, b, c, d

namespace {

struct Kind {
  bool odd;
  bool alternating;
};

Kind kind_of(char kind) {
  switch (kind) {
    case 'a': return {false, true};
    case 'b': return {true, true};
    case 'c': return {false, false};
    case 'd': return {true, false};
    default: throw std::invalid_argument(std::string("unknown series kind '") + kind + "'");
  }
}

}  // namespace

ExactTerm exact_series_term(char kind, unsigned long j, unsigned long n, unsigned long m) {
  const Kind k = kind_of(kind);
  const Rational c = k.odd ? Rational(3, 2) : Rational(1, 2);
  const ExactTerm gamma = gamma_half_integer(k.odd ? j + 1 : j);
  const Rational f = gauss_2f1_terminating(j, Rational(n) + c, c, 2) * gauss_2f1_terminating(j, Rational(m) + c, c, 2);
  Rational power(mpz_class(1) << static_cast<mp_bitcnt_t>(2 * j));
  if (k.alternating && j % 2 == 1) power = -power;
  Rational r = power * f / Rational(factorial(k.odd ? 2 * j + 1 : 2 * j));
  r.canonicalize();
  return gamma * gamma * ExactTerm(r);
}

TermSource series_terms(char kind, unsigned long n, unsigned long m) {
  const Kind k = kind_of(kind);
  return [k, n, m, kind](Bits bits) {
    CoeffSequence::GeneratorFactory factory = [k, n, m, bits]() -> CoeffSequence::Generator {
      // g_j = 4^j Gamma(j + c)^2 / ((2j + 2c - 1)! pi) by recurrence in j, and
      // F(-j, n + c; c; 2) = (-1)^j F(-n, -j; c; 2) leaves n + 1 terms per factor.
      struct State {
        unsigned long j = 0;
        Real g;
        Real pi;
      };
      auto st = std::make_shared<State>(State{0, k.odd ? Real(Rational(1, 4), bits) : Real(1, bits), Real::pi(bits)});
      const Rational c = k.odd ? Rational(3, 2) : Rational(1, 2);
      return [st, k, n, m, c, bits]() {
        const unsigned long j = st->j;
        const Rational jr(static_cast<long>(j));
        Rational f = gauss_2f1_terminating(n, -jr, c, 2) * gauss_2f1_terminating(m, -jr, c, 2);
        Real value = st->pi * st->g * Real(f, bits);
        if (k.alternating && j % 2 == 1) value = -value;
        st->g *= static_cast<long>(k.odd ? 2 * j + 3 : 2 * j + 1);
        st->g /= static_cast<long>(2 * j + 2);
        ++st->j;
        return Complex(std::move(value));
      };
    };
    CoeffSequence::ExactGenerator exact = [kind, n, m](unsigned long j) {
      return ExactComplex(ExactSum(exact_series_term(kind, j, n, m)));
    };
    return CoeffSequence(std::move(factory), bits, CoeffSequence::Options{}, std::move(exact));
  };
}

TermSource exact_series_terms(char kind, unsigned long n, unsigned long m) {
  const Kind k = kind_of(kind);
  return [k, n, m](Bits bits) {
    CoeffSequence::GeneratorFactory factory = [k, n, m, bits]() -> CoeffSequence::Generator {
      struct State {
        unsigned long j = 0;
        mpz_class num{1};
        mpz_class den;
        Real pi;
      };
      auto st = std::make_shared<State>(State{0, 1, k.odd ? 4 : 1, Real::pi(bits)});
      const Rational c = k.odd ? Rational(3, 2) : Rational(1, 2);
      return [st, k, n, m, c, bits]() {
        const unsigned long j = st->j;
        const Rational jr(static_cast<long>(j));
        const Rational f = gauss_2f1_terminating(n, -jr, c, 2) * gauss_2f1_terminating(m, -jr, c, 2);
        Real value = st->pi * (Real(st->num, bits) / Real(st->den, bits)) * Real(f, bits);
        if (k.alternating && j % 2 == 1) value = -value;
        st->num *= static_cast<unsigned long>(k.odd ? 2 * j + 3 : 2 * j + 1);
        st->den *= static_cast<unsigned long>(2 * j + 2);
        ++st->j;
        return Complex(std::move(value));
      };
    };
    return CoeffSequence(std::move(factory), bits, CoeffSequence::Options{});
  };
}

// ------------------------------------------------------- decompositions

namespace {

Distribution family_member(char letter, unsigned long n) {
  if (letter == 'f') return NormalizedMonomial{n};
  return NormalizedDeltaDeriv{n};
}

ExactSum exact_term_at(const Distribution& F, const Distribution& G, unsigned long l) {
  const ExactComplex t = conj(*coeff_exact(F, l)) * *coeff_exact(G, l);
  if (!t.im.is_zero()) throw std::logic_error("e-product term with imaginary part at index " + std::to_string(l));
  return t.re;
}

SurdTerm textbook_prefactor(const std::string& family, bool odd, unsigned long n, unsigned long m) {
  // Gamma(k + 1/2) = g_k sqrt(pi); the odd formulas use Gamma(k + 3/2) = g_{k+1} sqrt(pi).
  const Rational gammas =
      gamma_half_integer(odd ? n + 1 : n).mantissa() * gamma_half_integer(odd ? m + 1 : m).mantissa();
  const auto pow2 = [](unsigned long e) { return Rational(mpz_class(1) << static_cast<mp_bitcnt_t>(e)); };
  if (family == "phi-psi") {
    // (-1)^m 2^(n+m+1/2) / (pi^2 sqrt(n! m!)) and (-1)^(m+1) 2^(n+m+11/2) / (pi^2 sqrt(n! m!)).
    Rational r = gammas * pow2(n + m + (odd ? 5 : 0));
    if ((m + (odd ? 1 : 0)) % 2 == 1) r = -r;
    return SurdTerm(ExactTerm(r, -2, 1), ExactTerm(Rational(1) / Rational(factorial(n) * factorial(m))));
  }
  // 2^(n+m+1) / sqrt(pi^3 (2n)! (2m)!) and 2^(n+m+6) / sqrt(pi^3 (2n+1)! (2m+1)!).
  const unsigned long big_n = odd ? 2 * n + 1 : 2 * n;
  const unsigned long big_m = odd ? 2 * m + 1 : 2 * m;
  Rational r = gammas * pow2(n + m + (odd ? 6 : 1));
  ExactTerm coefficient(r, -1, 0);
  if (family == "psi-psi") coefficient *= ExactTerm((n + m) % 2 == 0 ? 2 : -2, 2, 0);
  return SurdTerm(coefficient, ExactTerm(Rational(1) / Rational(factorial(big_n) * factorial(big_m))));
}

}  // namespace

std::optional<ProductDecomposition> decompose(const std::string& family, unsigned long n, unsigned long m) {
  char left;
  char right;
  if (family == "phi-psi") left = 'f', right = 's';
  else if (family == "phi-phi") left = 'f', right = 'f';
  else if (family == "psi-psi") left = 's', right = 's';
  else throw std::invalid_argument("unknown family '" + family + "'");
  if (n % 2 != m % 2) return std::nullopt;

  const bool odd = n % 2 == 1;
  ProductDecomposition d;
  d.kind = family == "phi-psi" ? (odd ? 'b' : 'a') : (odd ? 'd' : 'c');
  d.n = n / 2;
  d.m = m / 2;
  const Distribution F = family_member(left, n);
  const Distribution G = family_member(right, m);

  const ExactTerm first = exact_series_term(d.kind, 0, d.n, d.m);
  const ExactSum ratio = exact_term_at(F, G, odd ? 1 : 0) * ExactSum(ExactTerm(1) / first);
  if (ratio.terms().size() != 1)
    throw std::logic_error("prefactor of " + family + " is not a single surd: " + ratio.to_string());
  d.prefactor = ratio.terms().front();
  for (unsigned long j = 1; j <= 4; ++j) {
    const ExactSum expected = ExactSum(d.prefactor) * ExactSum(exact_series_term(d.kind, j, d.n, d.m));
    const ExactSum got = exact_term_at(F, G, 2 * j + (odd ? 1 : 0));
    if (!(expected == got))
      throw std::logic_error(family + " term " + std::to_string(j) + " is " + got.to_string() + ", prefactor route gives " +
                             expected.to_string());
  }
  d.textbook_prefactor = textbook_prefactor(family, odd, d.n, d.m);
  return d;
}

namespace {

EProductResult product_via_series(const std::string& family, unsigned long n, unsigned long m,
                                  const SummationConfig& cfg) {
  const auto d = decompose(family, n, m);
  if (!d) {
    Series zero;
    zero.zero_by_parity = true;
    return classify_and_sum(zero, cfg);
  }
  const TermSource base = series_terms(d->kind, d->n, d->m);
  const SurdTerm prefactor = d->prefactor;
  Series s;
  s.terms = [base, prefactor](Bits bits) {
    const Real p = prefactor.to_real(bits);
    return base(bits).map([p](unsigned long, const Complex& z) { return z * p; },
                          [prefactor](unsigned long, const ExactComplex& z) {
                            return ExactComplex(ExactSum(prefactor)) * z;
                          });
  };
  s.exact = [kind = d->kind, hn = d->n, hm = d->m, prefactor](unsigned long j) {
    return ExactComplex(ExactSum(prefactor) * ExactSum(exact_series_term(kind, j, hn, hm)));
  };
  s.inspect = std::max<unsigned long>(16, cfg.max_terms / 2);
  if (family != "phi-psi") {
    // phi_n phi_n and psi_n psi_n have terms |<e_k, .>|^2.
    s.nonnegative = n == m;
  }
  EProductResult r = classify_and_sum(s, cfg);
  r.diagnostics.notes.push_back(std::string("series ") + d->kind + "_j(" + std::to_string(d->n) + "," +
                                std::to_string(d->m) + "), derived prefactor " + d->prefactor.to_string() +
                                ", textbook prefactor " + d->textbook_prefactor.to_string());
  return r;
}

}  // namespace

EProductResult phi_psi_product(unsigned long n, unsigned long m, const SummationConfig& cfg) {
  return product_via_series("phi-psi", n, m, cfg);
}

EProductResult phi_phi_product(unsigned long n, unsigned long m, const SummationConfig& cfg) {
  return product_via_series("phi-phi", n, m, cfg);
}

EProductResult psi_psi_product(unsigned long n, unsigned long m, const SummationConfig& cfg) {
  return product_via_series("psi-psi", n, m, cfg);
}

}  // namespace eprod
