#include <sstream>

#include "cli.hpp"
#include "eprod/hermite.hpp"
#include "eprod/operators.hpp"
#include "eprod/parse.hpp"

namespace eprod::cli {

namespace {

constexpr unsigned kShown = 25;

std::string show(const Real& x) { return x.to_string(kShown); }

std::string show(const Complex& z) { return show(z.re) + (z.im.is_zero() ? "" : " + " + show(z.im) + "i"); }

std::string show(const EProductResult& r) {
  std::string s = to_string(r.status);
  if (r.value) s += " " + show(*r.value);
  return s;
}

Real decimal_real(const std::string& text, Bits bits) { return Real(parse_rational(text), bits); }

// A valued result within `tol` of `expected`.
Row value_row(const std::string& identity, const EProductResult& r, const Complex& expected,
              const std::string& expected_text, const std::string& tol, Bits bits) {
  const bool pass = r.value && abs(*r.value - expected) <= decimal_real(tol, bits);
  return Row{identity, expected_text, show(r), tol, pass};
}

Row status_row(const std::string& identity, const EProductResult& r, Status expected, const std::string& certificate = {}) {
  bool pass = r.status == expected;
  std::string want = to_string(expected);
  if (!certificate.empty()) {
    pass = pass && r.diagnostics.certificate == certificate;
    want += " (" + certificate + ")";
  }
  std::string got = to_string(r.status);
  if (!r.diagnostics.certificate.empty()) got += " (" + r.diagnostics.certificate + ")";
  return Row{identity, want, got, "exact", pass};
}

EProductResult product(const std::string& left, const std::string& right, const SummationConfig& cfg) {
  return classify_and_sum(parse_distribution(left), parse_distribution(right), cfg);
}

std::vector<Row> ex1(const SummationConfig& cfg) {
  const Bits bits = cfg.bits();
  std::vector<Row> rows;
  for (const char* g : {"0", "1/2", "-1/2", "1", "-1", "2"}) {
    const std::string left = std::string("exp(") + g + ")";
    rows.push_back(value_row("<" + left + ", delta>_e", product(left, "delta", cfg), Complex(Real(1, bits)), "1",
                             "1e-20", bits));
  }
  // Closed form of the series at gamma = 1: sqrt(2) e^{1/2} M(i/2, -i, 0).
  const Complex z(Real(bits), Real(1, bits) / 2);
  const Complex x(Real(bits), Real(-1, bits));
  const Complex m = mehler_kernel(z, x, Complex(bits)) * (sqrt(Real(2, bits)) * exp(Real(1, bits) / 2));
  const Real err = abs(m - Complex(Real(1, bits)));
  rows.push_back(Row{"sqrt(2) e^(1/2) M(i/2, -i, 0)", "1", show(m.re), "1e-20", err <= decimal_real("1e-20", bits)});
  return rows;
}

std::vector<Row> ex2(const SummationConfig& cfg) {
  const Bits bits = cfg.bits();
  return {value_row("<cos(1), delta>_e", product("cos(1)", "delta", cfg), Complex(Real(1, bits)), "1", "1e-20", bits),
          value_row("<sin(1), delta>_e", product("sin(1)", "delta", cfg), Complex(bits), "0", "1e-20", bits)};
}

std::vector<Row> ex3(const SummationConfig& cfg) {
  std::vector<Row> rows;
  const EProductResult dd = product("delta", "delta", cfg);
  const bool raabe_ok = dd.diagnostics.raabe_estimate && *dd.diagnostics.raabe_estimate >= decimal_real("0.45", 64) &&
                        *dd.diagnostics.raabe_estimate <= decimal_real("0.55", 64);
  rows.push_back(Row{"<delta, delta>_e", "Divergent, Raabe in [0.45, 0.55]",
                     std::string(to_string(dd.status)) + ", Raabe " +
                         (dd.diagnostics.raabe_estimate ? dd.diagnostics.raabe_estimate->to_string(6) : "n/a"),
                     "[0.45, 0.55]", dd.status == Status::Divergent && raabe_ok});
  for (unsigned k = 0; k <= 6; ++k)
    for (unsigned l = 0; l <= 6; ++l)
      if ((k + l) % 2 == 1) {
        const std::string a = "delta^(" + std::to_string(k) + ")";
        const std::string b = "delta^(" + std::to_string(l) + ")";
        rows.push_back(status_row("<" + a + ", " + b + ">_e", product(a, b, cfg), Status::ZeroByParity));
      }
  rows.push_back(status_row("<delta', delta'>_e", product("delta'", "delta'", cfg), Status::Divergent, "domination"));
  return rows;
}

Row abel_row(const std::string& identity, char kind, const Real& expected, const std::string& expected_text,
             const SummationConfig& cfg) {
  const Bits bits = cfg.bits();
  const AbelResult r = abel_sum(exact_series_terms(kind, 0, 0), cfg);
  const std::string got = r.value ? show(r.value->re) : "no limit (" + r.failure + ")";
  const bool pass = r.converged && r.value && abs(*r.value - Complex(expected)) <= decimal_real("1e-15", bits);
  return Row{identity, expected_text, got, "1e-15", pass};
}

std::vector<Row> ex4(const SummationConfig& cfg) {
  const Bits bits = cfg.bits();
  std::vector<Row> rows;
  for (unsigned n = 0; n <= 6; ++n)
    for (unsigned m = 0; m <= 6; ++m) {
      const std::string a = "phi(" + std::to_string(n) + ")";
      const std::string b = "psi(" + std::to_string(m) + ")";
      const EProductResult r = product(a, b, cfg);
      const bool diagonal = n == m;
      rows.push_back(value_row("<" + a + ", " + b + ">_e", r, Complex(Real(diagonal ? 1 : 0, bits)),
                               diagonal ? "1" : "0", "1e-12", bits));
    }
  const Real pi = Real::pi(bits);
  rows.push_back(abel_row("sum_j a_j(0,0)", 'a', pi / sqrt(Real(2, bits)), "pi/sqrt(2)", cfg));
  rows.push_back(abel_row("lim_{z->-4} S(z)", 'b', pi / (8 * sqrt(Real(2, bits))), "pi/(8 sqrt(2))", cfg));
  return rows;
}

std::vector<Row> ex5(const SummationConfig& cfg) {
  std::vector<Row> rows;
  for (const char* family : {"phi", "psi"})
    for (unsigned n = 0; n <= 3; ++n)
      for (unsigned m = 0; m <= 3; ++m) {
        const std::string a = std::string(family) + "(" + std::to_string(n) + ")";
        const std::string b = std::string(family) + "(" + std::to_string(m) + ")";
        rows.push_back(status_row("<" + a + ", " + b + ">_e", product(a, b, cfg),
                                  (n + m) % 2 ? Status::ZeroByParity : Status::Divergent));
      }

  // Partial sums S_K, K <= 200, of the even-even products, exactly.
  constexpr unsigned long K = 201;
  const ExactTerm two_pi(2, 2, 0);
  for (unsigned n = 0; n <= 3; ++n)
    for (unsigned m = 0; m <= 3; ++m) {
      const std::string i = std::to_string(2 * n), j = std::to_string(2 * m);
      const auto phi = exact_partial_sums(parse_distribution("phi(" + i + ")"), parse_distribution("phi(" + j + ")"), K);
      const auto psi = exact_partial_sums(parse_distribution("psi(" + i + ")"), parse_distribution("psi(" + j + ")"), K);
      const long sign = (n + m) % 2 ? -1 : 1;
      const ExactComplex stated(ExactSum(two_pi * ExactTerm(sign)));
      const ExactComplex derived(ExactSum(ExactTerm(sign) / two_pi));
      unsigned long stated_holds = 0, derived_holds = 0;
      for (unsigned long k = 0; k < K; ++k) {
        stated_holds += psi[k] == stated * phi[k];
        derived_holds += psi[k] == derived * phi[k];
      }
      const std::string pair = "(" + i + "," + j + ")";
      rows.push_back(Row{"S_K psi-psi" + pair + " = 2 pi (-1)^(n+m) S_K phi-phi" + pair, "holds for K = 0..200",
                         "holds for " + std::to_string(stated_holds) + " of 201", "exact", stated_holds == K});
      rows.push_back(Row{"S_K psi-psi" + pair + " = (-1)^(n+m)/(2 pi) S_K phi-phi" + pair, "holds for K = 0..200",
                         "holds for " + std::to_string(derived_holds) + " of 201", "exact", derived_holds == K});
    }
  return rows;
}

struct Triple {
  const char* op;
  const char* Phi;
  const char* phi;
};

std::vector<Row> adjoint(const SummationConfig& cfg) {
  std::vector<Row> rows;
  const auto structural = [&](const std::string& in, const std::string& expected) {
    const OperatorExpr got = ddagger(parse_operator(in));
    rows.push_back(Row{"ddagger(" + in + ")", expected, print(got), "exact", got == parse_operator(expected)});
  };
  structural("c", "cdag");
  structural("cdag", "c");
  structural("x", "x");
  structural("D", "-D");

  const Triple triples[] = {
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
  const Bits bits = cfg.bits();
  for (const Triple& t : triples) {
    const std::string identity = std::string("<(") + t.op + ")^ddag " + t.Phi + ", " + t.phi + ">_e = <" + t.Phi +
                                 ", (" + t.op + ") " + t.phi + ">_e";
    try {
      const AdjointReport r =
          adjoint_check(parse_operator(t.op), parse_distribution(t.Phi), parse_distribution(t.phi), cfg);
      const bool pass = r.difference <= decimal_real("1e-15", bits);
      rows.push_back(Row{identity, show(*r.rhs.value), show(*r.lhs.value), "1e-15", pass});
    } catch (const InconclusivePairing& e) {
      rows.push_back(Row{identity, "a value on both sides", e.what(), "1e-15", false});
    }
  }
  return rows;
}

}  // namespace

std::vector<Row> reproduce_rows(const std::string& id, const SummationConfig& cfg) {
  if (id == "ex1") return ex1(cfg);
  if (id == "ex2") return ex2(cfg);
  if (id == "ex3") return ex3(cfg);
  if (id == "ex4") return ex4(cfg);
  if (id == "ex5") return ex5(cfg);
  if (id == "adjoint") return adjoint(cfg);
  throw std::invalid_argument("unknown example '" + id + "' (ex1, ex2, ex3, ex4, ex5, adjoint)");
}

}  // namespace eprod::cli
