// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "eprod/eproduct.hpp"
#include "eprod/hermite.hpp"
#include "eprod/operators.hpp"
#include "eprod/parse.hpp"
#include "oracles.hpp"

using namespace eprod;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Tolerances, fixed here rather than taken from configuration.
constexpr const char* kTolExp = "1e-20";
constexpr const char* kTolTrig = "1e-20";
constexpr const char* kRaabeLow = "0.45";
constexpr const char* kRaabeHigh = "0.55";
constexpr unsigned long kRaabeTerms = 5000;
constexpr const char* kTolAbel = "1e-15";
constexpr const char* kTolPhiPsi = "1e-12";
constexpr const char* kTolAdjoint = "1e-15";
constexpr const char* kTolParseval = "1e-45";  // 10^-(D - 15) at D = 60
constexpr const char* kTolCoeff = "1e-45";
constexpr const char* kTolAbelConsistency = "1e-20";
constexpr double kBudgetExp = 2.0;
constexpr double kBudgetTrig = 2.0;
constexpr double kBudgetGrid = 300.0;

// Collects failures of one criterion.
struct Check {
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  bool pass() const { return failures.empty(); }
};

Distribution P(const std::string& text) { return parse_distribution(text); }

Real tol(const char* text, Bits bits) { return Real(parse_rational(text), bits); }

std::string show(const Real& x) { return x.to_string(12); }

bool within(const std::optional<Complex>& got, const Complex& want, const Real& t) {
  return got && abs(*got - want) <= t;
}

std::string describe(const EProductResult& r) {
  std::string s = to_string(r.status);
  if (r.value) s += " " + show(r.value->re) + (r.value->im.is_zero() ? "" : " + " + show(r.value->im) + "i");
  return s;
}

Check criterion1(const SummationConfig& cfg) {
  Check c;
  const Bits b = cfg.bits();
  double worst = 0;
  for (const char* g : {"0", "1/2", "-1/2", "1", "-1", "2"}) {
    const std::string left = std::string("exp(") + g + ")";
    const auto start = Clock::now();
    const EProductResult r = classify_and_sum(P(left), P("delta"), cfg);
    const double t = seconds_since(start);
    worst = std::max(worst, t);
    c.expect(within(r.value, Complex(Real(1, b)), tol(kTolExp, b)), "<" + left + ", delta> = " + describe(r));
    c.expect(t <= kBudgetExp, left + " took " + std::to_string(t) + " s");
  }
  c.notes.push_back("slowest " + std::to_string(worst) + " s");
  return c;
}

Check criterion2(const SummationConfig& cfg) {
  Check c;
  const Bits b = cfg.bits();
  const auto start = Clock::now();
  const EProductResult cs = classify_and_sum(P("cos(1)"), P("delta"), cfg);
  const EProductResult sn = classify_and_sum(P("sin(1)"), P("delta"), cfg);
  const double t = seconds_since(start);
  c.expect(within(cs.value, Complex(Real(1, b)), tol(kTolTrig, b)), "<cos, delta> = " + describe(cs));
  c.expect(within(sn.value, Complex(b), tol(kTolTrig, b)), "<sin, delta> = " + describe(sn));
  c.expect(t <= kBudgetTrig, "took " + std::to_string(t) + " s");
  c.notes.push_back(std::to_string(t) + " s");
  return c;
}

Check criterion3(SummationConfig cfg) {
  Check c;
  cfg.max_terms = kRaabeTerms;
  const EProductResult r = classify_and_sum(P("delta"), P("delta"), cfg);
  c.expect(r.status == Status::Divergent, "status " + describe(r));
  const auto& raabe = r.diagnostics.raabe_estimate;
  c.expect(raabe && *raabe >= tol(kRaabeLow, 64) && *raabe <= tol(kRaabeHigh, 64),
           "Raabe " + (raabe ? show(*raabe) : std::string("missing")));
  c.expect(r.diagnostics.terms_used <= kRaabeTerms, "used " + std::to_string(r.diagnostics.terms_used) + " terms");
  if (raabe) c.notes.push_back("Raabe " + raabe->to_string(6) + ", " + std::to_string(r.diagnostics.terms_used) + " terms");
  return c;
}

Check criterion4(const SummationConfig& cfg) {
  Check c;
  unsigned pairs = 0;
  for (unsigned k = 0; k <= 6; ++k)
    for (unsigned l = 0; l <= 6; ++l) {
      if ((k + l) % 2 == 0) continue;
      const Distribution a = DeltaDeriv{k}, bb = DeltaDeriv{l};
      const EProductResult r = classify_and_sum(a, bb, cfg);
      const bool exact_zero = r.exact_value && r.exact_value->is_zero();
      c.expect(r.status == Status::ZeroByParity && exact_zero,
               "(" + std::to_string(k) + "," + std::to_string(l) + ") " + describe(r));
      ++pairs;
    }
  const EProductResult d1 = classify_and_sum(P("delta'"), P("delta'"), cfg);
  c.expect(d1.status == Status::Divergent && d1.diagnostics.certificate == "domination",
           "<delta', delta'> " + describe(d1) + " (" + d1.diagnostics.certificate + ")");
  c.notes.push_back(std::to_string(pairs) + " odd pairs, delta' certificate " + d1.diagnostics.certificate);
  return c;
}

Check criterion5(const SummationConfig& cfg) {
  Check c;
  const Bits b = cfg.bits();
  const Real pi = Real::pi(b);
  const Real root2 = sqrt(Real(2, b));
  const std::pair<char, Real> cases[] = {{'a', pi / root2}, {'b', pi / (8 * root2)}};
  for (const auto& [kind, want] : cases) {
    const AbelResult r = abel_sum(exact_series_terms(kind, 0, 0), cfg);
    c.expect(r.converged && within(r.value, Complex(want), tol(kTolAbel, b)),
             std::string(1, kind) + ": " + (r.value ? show(r.value->re) : r.failure));
    if (r.value) c.notes.push_back(std::string(1, kind) + " err " + abs(*r.value - Complex(want)).to_string(2));
  }
  return c;
}

Check criterion6(const SummationConfig& cfg) {
  Check c;
  const Bits b = cfg.bits();
  const auto start = Clock::now();
  Real worst(b);
  for (unsigned n = 0; n <= 6; ++n)
    for (unsigned m = 0; m <= 6; ++m) {
      const EProductResult r = classify_and_sum(NormalizedMonomial{n}, NormalizedDeltaDeriv{m}, cfg);
      const Complex want(Real(n == m ? 1 : 0, b));
      c.expect(within(r.value, want, tol(kTolPhiPsi, b)),
               "(" + std::to_string(n) + "," + std::to_string(m) + ") " + describe(r));
      if (r.value) worst = max(worst, abs(*r.value - want));
    }
  const double t = seconds_since(start);
  c.expect(t <= kBudgetGrid, "grid took " + std::to_string(t) + " s");
  c.notes.push_back("max err " + worst.to_string(2) + ", " + std::to_string(t) + " s");
  return c;
}

Check criterion7(const SummationConfig& cfg) {
  Check c;
  for (const char* family : {"phi", "psi"})
    for (unsigned n = 0; n <= 3; ++n)
      for (unsigned m = 0; m <= 3; ++m) {
        const EProductResult r = std::string(family) == "phi" ? phi_phi_product(n, m, cfg) : psi_psi_product(n, m, cfg);
        const Status want = (n + m) % 2 ? Status::ZeroByParity : Status::Divergent;
        c.expect(r.status == want, std::string(family) + "(" + std::to_string(n) + "," + std::to_string(m) + ") " +
                                       describe(r));
      }

  // S_K^psi against S_K^phi for the even pairs (2n, 2m), K = 0..200.
  constexpr unsigned long K = 201;
  const ExactTerm two_pi(2, 2, 0);
  unsigned long stated = 0, inverse = 0, total = 0;
  for (unsigned n = 0; n <= 3; ++n)
    for (unsigned m = 0; m <= 3; ++m) {
      const std::string i = std::to_string(2 * n), j = std::to_string(2 * m);
      const auto phi = exact_partial_sums(P("phi(" + i + ")"), P("phi(" + j + ")"), K);
      const auto psi = exact_partial_sums(P("psi(" + i + ")"), P("psi(" + j + ")"), K);
      const ExactTerm sign((n + m) % 2 ? -1 : 1);
      const ExactComplex times(ExactSum(two_pi * sign)), over(ExactSum(sign / two_pi));
      for (unsigned long k = 0; k < K; ++k) {
        stated += psi[k] == times * phi[k];
        inverse += psi[k] == over * phi[k];
        ++total;
      }
    }
  c.expect(stated == total, "S_K^psi = 2 pi (-1)^(n+m) S_K^phi holds for " + std::to_string(stated) + " of " +
                                std::to_string(total));
  c.notes.push_back("S_K^psi = (-1)^(n+m) S_K^phi / (2 pi) holds for " + std::to_string(inverse) + " of " +
                    std::to_string(total));
  return c;
}

Check criterion8(const SummationConfig& cfg) {
  Check c;
  const Bits b = cfg.bits();
  const std::pair<const char*, const char*> structural[] = {{"c", "cdag"}, {"x", "x"}, {"D", "-D"}};
  for (const auto& [in, want] : structural)
    c.expect(ddagger(parse_operator(in)) == parse_operator(want),
             std::string("ddagger(") + in + ") = " + print(ddagger(parse_operator(in))));

  const std::tuple<const char*, const char*, const char*> triples[] = {
      {"c", "delta", "e(2)"},
      {"cdag", "delta", "e(3)"},
      {"x", "x^2", "e(1)"},
      {"D", "delta'", "e(2)"},
      {"c cdag", "cos(1)", "e(4)"},
      {"x D", "exp(1/2)", "e(3)"},
      {"c + 2i*cdag", "delta^(2)", "l2[1, 0, 1]"},
      {"D D", "x^3", "e(5)"},
      {"cdag cdag c", "psi(3)", "e(6)"},
      {"x x + D", "sin(1)", "l2[1, 1/2, 1/4]"},
  };
  Real worst(b);
  for (const auto& [op, Phi, phi] : triples) {
    const std::string label = std::string(op) + " / " + Phi + " / " + phi;
    try {
      const AdjointReport r = adjoint_check(parse_operator(op), P(Phi), P(phi), cfg);
      c.expect(r.difference <= tol(kTolAdjoint, b), label + " differ by " + r.difference.to_string(3));
      worst = max(worst, r.difference);
    } catch (const InconclusivePairing& e) {
      c.expect(false, label + ": " + e.what());
    }
  }
  c.notes.push_back("10 triples, max difference " + worst.to_string(2));
  return c;
}

// Criterion 9 sub-suites.

void conjugate_symmetry(Check& c) {
  const Distribution F = P("i*delta + x^2 - 1/2*psi(3)");
  const Distribution G = P("delta'' + 2*e(3) + (1-i)*phi(1)");
  const auto fg = exact_partial_sums(F, G, 60);
  const auto gf = exact_partial_sums(G, F, 60);
  for (unsigned long K = 0; K < 60; ++K) c.expect(fg[K] == conj(gf[K]), "conjugate symmetry at K=" + std::to_string(K));
}

void linearity(Check& c) {
  const Distribution F = P("delta + x"), G = P("psi(2)"), L = P("x^3 - delta'");
  const Weight alpha{Rational(3, 2), Rational(-2), 1};
  const Weight beta{Rational(-1, 5), Rational(1), 1};
  const auto lhs = exact_partial_sums(F, alpha * G + beta * L, 60);
  const auto g = exact_partial_sums(F, G, 60);
  const auto l = exact_partial_sums(F, L, 60);
  for (unsigned long K = 0; K < 60; ++K)
    c.expect(lhs[K] == alpha.to_exact() * g[K] + beta.to_exact() * l[K], "linearity at K=" + std::to_string(K));
}

void positivity(Check& c, Bits b) {
  for (const char* f : {"cos(1) + 2*delta'", "exp(-1)", "(1+i)*x^2 + psi(1)", "delta"}) {
    const auto s = partial_sums(P(f), P(f), 200, b);
    for (unsigned long K = 0; K < s.size(); ++K) {
      const bool ok = s[K].im.is_zero() && s[K].re.sign() >= 0 && (K == 0 || s[K].re >= s[K - 1].re);
      c.expect(ok, std::string("positivity of ") + f + " at K=" + std::to_string(K));
    }
  }
}

void single_term(Check& c, const SummationConfig& cfg) {
  for (const char* g : {"delta", "delta'''", "x^4", "psi(2) + 3*phi(4)", "i*delta''", "e(3) - 2*delta'"}) {
    const Distribution G = P(g);
    for (unsigned long m = 0; m <= 6; ++m) {
      const EProductResult r = classify_and_sum(G, Eigenfunction{m}, cfg);
      c.expect(r.exact_value && *r.exact_value == conj(*coeff_exact(G, m)),
               std::string("single basis element ") + g + " m=" + std::to_string(m));
    }
  }
}

void parseval(Check& c, const SummationConfig& cfg) {
  const Bits b = cfg.bits();
  std::mt19937 rng(5);
  const oracle::EigenGrid grid(8, b);
  std::uniform_int_distribution<int> num(-6, 6), den(1, 4);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Weight> fc, gc;
    for (unsigned long n = 0; n <= 8; ++n) {
      fc.push_back(Weight::real(Rational(num(rng), den(rng))));
      gc.push_back(Weight::real(Rational(num(rng), den(rng))));
    }
    Real integral(b);
    for (std::size_t i = 0; i < grid.x.size(); ++i) {
      Real fx(b), gx(b);
      for (unsigned long n = 0; n <= 8; ++n) {
        fx += Real(fc[n].re, b) * grid.e[n][i];
        gx += Real(gc[n].re, b) * grid.e[n][i];
      }
      integral += fx * gx;
    }
    integral *= grid.h;
    const EProductResult r =
        classify_and_sum(L2Sample::from_coefficients(fc), L2Sample::from_coefficients(gc), cfg);
    c.expect(within(r.value, Complex(integral), tol(kTolParseval, b) * max(abs(integral), Real(1, b))),
             "Parseval trial " + std::to_string(trial) + ": " + describe(r) + " vs " + show(integral));
  }
}

void bessel(Check& c) {
  SummationConfig cfg;
  cfg.digits = 30;
  const Bits b = cfg.bits();
  std::mt19937 rng(3);
  const oracle::EigenGrid grid(10, b, 4, 12);
  std::uniform_int_distribution<unsigned long> length(1, 11);
  std::uniform_int_distribution<int> num(-6, 6), den(1, 4);
  const auto random_l2 = [&](unsigned long n) {
    std::vector<Weight> w;
    for (unsigned long k = 0; k < n; ++k) w.push_back(Weight{Rational(num(rng), den(rng)), Rational(num(rng), den(rng)), 1});
    return canonicalize(L2Sample::from_coefficients(w));
  };
  const auto l2_norm = [&](const Distribution& d) {
    Real sq(b);
    const auto s = coeff_sequence(d, b);
    for (std::size_t i = 0; i < grid.x.size(); ++i) {
      Complex v(b);
      for (unsigned long n = 0; n <= 10; ++n) v = v + s.at(n) * grid.e[n][i];
      sq += norm(v);
    }
    return sqrt(sq * grid.h);
  };
  const Real slack = 1 + tol("1e-20", b);
  for (int trial = 0; trial < 100; ++trial) {
    const Distribution f = random_l2(length(rng));
    const Distribution g = random_l2(length(rng));
    const EProductResult r = classify_and_sum(f, g, cfg);
    c.expect(r.value && abs(*r.value) <= l2_norm(f) * l2_norm(g) * slack, "Bessel trial " + std::to_string(trial));
  }
}

void abel_consistency(Check& c, const SummationConfig& cfg) {
  const Bits b = cfg.bits();
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> num(-17, 17), den(18, 40), scale(-9, 9), kind(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const Rational q(num(rng), den(rng));
    const int s = scale(rng);
    const Rational k(s == 0 ? 1 : s, 3);
    const bool geometric = kind(rng) == 0;
    const auto term = [q, k, geometric](unsigned long j, Bits bb) {
      Real v = Real(k, bb) * pow(Real(q, bb), static_cast<long>(j));
      if (!geometric) v = v / static_cast<long>(j + 1);
      return Complex(v);
    };
    // Direct sums: k / (1 - q), and -k log(1 - q) / q.
    const Real direct = geometric ? Real(k, b) / (1 - Real(q, b))
                                  : (sgn(q) == 0 ? Real(k, b) : -Real(k, b) * log(1 - Real(q, b)) / Real(q, b));
    const AbelResult r = abel_sum(term, cfg);
    c.expect(r.converged && within(r.value, Complex(direct), tol(kTolAbelConsistency, b) * max(abs(direct), Real(1, b))),
             "Abel series " + std::to_string(trial) + " (q = " + q.get_str() + (geometric ? ", geometric" : ", logarithmic") +
                 "): " + (r.value ? show(r.value->re) : r.failure) + " vs " + show(direct));
  }
}

Real inv_root_factorial(unsigned long n, Bits b) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Real(1, b) / sqrt(Real(f, b));
}

void closed_forms(Check& c, Bits b) {
  struct Case {
    std::string text;
    std::function<Real(const Real&)> f;
    std::function<Real(unsigned long)> at_zero;
  };
  std::vector<Case> cases;
  for (unsigned long k : {0ul, 1ul, 2ul, 5ul})
    cases.push_back({"delta^(" + std::to_string(k) + ")", {}, [k, b](unsigned long n) {
                       const Real v = oracle::eigenfunction_derivative_at_zero(n, k, b);
                       return k % 2 ? -v : v;
                     }});
  for (unsigned long k : {0ul, 3ul, 6ul})
    cases.push_back({"psi(" + std::to_string(k) + ")", {}, [k, b](unsigned long n) {
                       return oracle::eigenfunction_derivative_at_zero(n, k, b) * inv_root_factorial(k, b);
                     }});
  for (unsigned long p : {0ul, 1ul, 4ul, 7ul})
    cases.push_back({"x^" + std::to_string(p), [p](const Real& x) { return pow(x, static_cast<long>(p)); }, {}});
  for (unsigned long p : {2ul, 5ul})
    cases.push_back({"phi(" + std::to_string(p) + ")",
                     [p, b](const Real& x) { return pow(x, static_cast<long>(p)) * inv_root_factorial(p, b); }, {}});
  cases.push_back({"e(4)", [](const Real& x) { return oracle::eigenfunction(4, x); }, {}});
  cases.push_back({"exp(-1)", [](const Real& x) { return exp(-x); }, {}});
  cases.push_back({"exp(1/2)", [](const Real& x) { return exp(x / 2); }, {}});
  cases.push_back({"exp(2)", [](const Real& x) { return exp(2 * x); }, {}});
  cases.push_back({"cos(3/2)", [b](const Real& x) { return cos(Real::parse("1.5", b) * x); }, {}});
  cases.push_back({"sin(2)", [](const Real& x) { return sin(2 * x); }, {}});
  cases.push_back({"l2[1, -1/2, 0, 3]", [](const Real& x) {
                     return oracle::eigenfunction(0, x) - oracle::eigenfunction(1, x) / 2 +
                            3 * oracle::eigenfunction(3, x);
                   }, {}});

  const oracle::EigenGrid grid(30, b);
  for (const auto& k : cases) {
    const Distribution d = P(k.text);
    std::vector<Real> samples;
    if (k.f)
      for (const Real& x : grid.x) samples.push_back(k.f(x));
    for (unsigned long n = 0; n <= 30; ++n) {
      const Real want = k.f ? grid.integrate(samples, n) : k.at_zero(n);
      const Complex got = coeff(d, n, b);
      c.expect(abs(got - Complex(want)) <= tol(kTolCoeff, b) * max(abs(want), Real(1, b)),
               "coefficient " + k.text + " n=" + std::to_string(n));
    }
  }
}

Check criterion9(const SummationConfig& cfg) {
  Check c;
  const Bits b = cfg.bits();
  const std::pair<const char*, std::function<void()>> suites[] = {
      {"conjugate symmetry", [&] { conjugate_symmetry(c); }},
      {"linearity", [&] { linearity(c); }},
      {"positivity", [&] { positivity(c, b); }},
      {"single term", [&] { single_term(c, cfg); }},
      {"Parseval", [&] { parseval(c, cfg); }},
      {"Bessel", [&] { bessel(c); }},
      {"Abel consistency", [&] { abel_consistency(c, cfg); }},
      {"closed forms", [&] { closed_forms(c, b); }},
  };
  std::string ran;
  for (const auto& [name, run] : suites) {
    const std::size_t before = c.failures.size();
    run();
    ran += std::string(ran.empty() ? "" : ", ") + name + (c.failures.size() == before ? "" : " (failed)");
  }
  c.notes.push_back(ran);
  return c;
}

}  // namespace

int main() {
  const SummationConfig cfg;
  const std::pair<const char*, std::function<Check()>> criteria[] = {
      {"exp(g x) against delta is 1", [&] { return criterion1(cfg); }},
      {"cos and sin against delta", [&] { return criterion2(cfg); }},
      {"delta-delta diverges, Raabe near 1/2", [&] { return criterion3(cfg); }},
      {"delta derivatives: parity zeros, domination", [&] { return criterion4(cfg); }},
      {"Abel limits pi/sqrt(2), pi/(8 sqrt(2))", [&] { return criterion5(cfg); }},
      {"phi_n against psi_m is the identity on [0,6]^2", [&] { return criterion6(cfg); }},
      {"phi-phi and psi-psi classes, partial-sum relation", [&] { return criterion7(cfg); }},
      {"adjoint identities", [&] { return criterion8(cfg); }},
      {"property suites", [&] { return criterion9(cfg); }},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [title, run] : criteria) {
    ++index;
    const auto start = Clock::now();
    Check c;
    try {
      c = run();
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    const double t = seconds_since(start);
    std::ostringstream line;
    line << (c.pass() ? "PASS" : "FAIL") << "  criterion " << index << ": " << title;
    for (const auto& n : c.notes) line << " | " << n;
    char buf[32];
    std::snprintf(buf, sizeof buf, " [%.2f s]", t);
    line << buf;
    std::cout << line.str() << std::endl;
    const std::size_t shown = std::min<std::size_t>(c.failures.size(), 5);
    for (std::size_t i = 0; i < shown; ++i) std::cout << "      " << c.failures[i] << "\n";
    if (c.failures.size() > shown) std::cout << "      ... " << c.failures.size() - shown << " more\n";
    failed += !c.pass();
  }
  std::cout << (9 - failed) << " of 9 criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
